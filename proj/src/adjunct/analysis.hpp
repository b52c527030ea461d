// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "adj/adjunct/adjunct.hpp"

#include <map>
#include <set>
#include <vector>

namespace adj::adjunct::detail {

struct FunctionAnalysis {
  std::map<int, Verdict> verdicts; ///< every pointer-typed var, by declId
  std::map<int, std::vector<cast::SourceSpan>> evidence;
  std::set<int> decidable;
  /// Loads `q[k]` whose value is the pointer held in adjuncted var `a`.
  std::map<const cast::Expr *, int> loadTarget;
  /// Pointer comparisons and differences whose operands share one base.
  std::set<const cast::Expr *> sameBase;
  /// Statements after which the named adjuncts must be reset to 0.
  std::map<const cast::Stmt *, std::vector<int>> resetAfter;
};

/// `fn` must be type checked and deref-normalized. Addresses in the result
/// point into `fn`.
FunctionAnalysis analyze(const cast::Function &fn, const effects::EffectDatabase &db);

} // namespace adj::adjunct::detail
