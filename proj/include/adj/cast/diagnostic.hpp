// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "adj/cast/ast.hpp"

#include <stdexcept>
#include <string>

namespace adj::cast {

enum class ErrorKind { Syntax, Unsupported, Type };

/// Front-end failure. what() is the one-line "file:line:col: error: msg" form.
class FrontendError : public std::runtime_error {
public:
  FrontendError(ErrorKind kind, SourceSpan span, const std::string &message);

  ErrorKind kind() const { return kind_; }
  const SourceSpan &span() const { return span_; }
  const std::string &message() const { return message_; }

private:
  ErrorKind kind_;
  SourceSpan span_;
  std::string message_;
};

enum class Severity { Error, Warning, Note };

/// Formats "file:line:col: severity: message". Colors only when asked.
std::string formatDiagnostic(const SourceSpan &span, Severity severity, const std::string &message,
                             bool color = false);

} // namespace adj::cast
