// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Rewrites list-of-lists initialization (one contiguous buffer carved into
// rows through cursor pointers) into one allocation per row.

#pragma once

#include "adj/cast/ast.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace adj::patterns {

struct RowBinding {
  cast::Expr target; ///< member lvalue, e.g. A->ptr_to_vals[currow]
  std::string cursor;
};

struct LilMatch {
  std::string function;
  cast::SourceSpan scope; ///< the row loop
  std::vector<std::string> cursors;
  std::vector<RowBinding> rowBindings;
  cast::Expr rowLength;
  cast::Expr rowCount;
  std::vector<cast::Stmt> bufferDecls;
};

class LilError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::vector<LilMatch> findLil(const cast::TranslationUnit &tu);

/// Throws LilError when `m` no longer describes `tu`.
cast::TranslationUnit rewriteLil(const cast::TranslationUnit &tu, const LilMatch &m);

/// Applies every match in order.
cast::TranslationUnit rewriteAllLil(const cast::TranslationUnit &tu);

} // namespace adj::patterns
