// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Applicability statistics: how many pointer variables the adjunct
// transformation can take, and how many higher-order pointers iterate.

#pragma once

#include "adj/cast/ast.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adj::scan {

inline constexpr const char *kAllocationDelegation = "allocation-delegation";
inline constexpr const char *kArgv = "argv";

enum class Category { Applicable, NonApplicable, AllocationDelegation, Argv };
const char *categoryName(Category c);

struct Counts {
  long loc = 0;
  long applicable = 0;
  long nonApplicable = 0;
  std::map<std::string, long> exemptions{{kAllocationDelegation, 0}, {kArgv, 0}};

  Counts &operator+=(const Counts &o);
  friend bool operator==(const Counts &, const Counts &) = default;
};

/// One pointer variable (parameter or local) and where it was counted.
struct Finding {
  std::string function;
  std::string variable;
  int order = 1;
  Category category = Category::Applicable;
  cast::SourceSpan span;
};

enum class FileStatus { Ok, ParseError, IoError };
const char *fileStatusName(FileStatus s);

struct FileReport {
  std::string path;
  FileStatus status = FileStatus::Ok;
  std::string message; ///< parse or I/O error
  Counts counts;
  std::vector<Finding> findings;
};

struct ApplicabilityReport {
  std::vector<FileReport> files; ///< sorted by path
  Counts total;
};

/// Non-blank lines that are not comment-only.
long countLoc(std::string_view text);

FileReport scanSource(std::string_view text, const std::string &path);

/// Files are scanned concurrently; the report does not depend on the order
/// of `paths`. Unreadable files are reported with FileStatus::IoError.
ApplicabilityReport scan(const std::vector<std::string> &paths);

} // namespace adj::scan
