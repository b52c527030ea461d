// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Loop dependence analysis over symbolic per-iteration access intervals.

#pragma once

#include "adj/cast/ast.hpp"
#include "adj/effects/effects.hpp"

#include <string>
#include <vector>

namespace adj::depend {

enum class Verdict { Parallel, Serial, Unknown };

const char *verdictName(Verdict v);

/// Updated exactly once per iteration by a loop-invariant stride.
struct InductionVar {
  std::string variable;
  cast::SourceSpan loop;
  cast::Expr start;
  cast::Expr stride;
};

enum class AccessKind { Read, Write };

const char *accessKindName(AccessKind k);

/// One access per subscript, or one whole-container access per pointer
/// argument of a call. Ranges are half-open [lo, hi) in the iteration
/// number `t` of the summarized loop and loop invariants; a value `v@0` is v
/// on loop entry.
struct AccessSummary {
  std::string container;
  AccessKind kind = AccessKind::Read;
  bool wholeContainer = false;
  bool affine = true;
  std::string lo;
  std::string hi;
  cast::SourceSpan site;
};

struct LoopReport {
  std::string function;
  cast::SourceSpan span;
  Verdict verdict = Verdict::Unknown;
  bool reduction = false;
  std::vector<InductionVar> inductionVars;
  std::vector<std::string> evidence;
};

struct DependenceReport {
  std::vector<LoopReport> loops; ///< in source order, nested loops after their parent

  /// Loop starting on `line` (first match), or nullptr.
  const LoopReport *atLine(std::uint32_t line) const;
};

/// `loop` must be a For or While statement inside `fn`.
std::vector<InductionVar> findInduction(const cast::Function &fn, const cast::Stmt &loop);

std::vector<AccessSummary> summarizeAccesses(const cast::Function &fn, const cast::Stmt &loop,
                                             const effects::EffectDatabase &db = effects::EffectDatabase::builtins());

/// Distinct pointer parameters are assumed not to alias. The unit must be
/// type checked.
DependenceReport analyze(const cast::TranslationUnit &tu, const effects::EffectDatabase &db = effects::EffectDatabase::builtins());

} // namespace adj::depend
