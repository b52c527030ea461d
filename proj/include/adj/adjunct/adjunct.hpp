// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pointer disaggregation: each decidable pointer p keeps its container and
// gains a signed offset variable p_adj that absorbs all pointer movement.

#pragma once

#include "adj/cast/ast.hpp"
#include "adj/effects/effects.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace adj::adjunct {

enum class Verdict {
  Decidable,
  ConditionalReassignment,
  AddressTakenEscape,
  HigherOrderIterated,
  UnsupportedArithmetic,
};

const char *verdictName(Verdict v);

struct PointerClass {
  std::string function;
  std::string variable;
  int declId = -1;
  cast::SourceSpan declSpan;
  Verdict verdict = Verdict::Decidable;
  std::vector<cast::SourceSpan> evidence;
};

struct AdjunctEntry {
  std::string function;
  std::string pointer;
  int declId = -1;
  std::string adjunct;
};

struct AdjunctPlan {
  std::vector<AdjunctEntry> mapping; ///< exactly the decidable pointers
  cast::CType adjunctType = cast::CType::integer(64, true);
  std::vector<PointerClass> classes;

  const AdjunctEntry *find(const std::string &function, const std::string &pointer) const;
};

struct BackOff {
  std::string function;
  std::string pointer;
  Verdict verdict = Verdict::Decidable;
  cast::SourceSpan span;
};

/// Rule kinds: "deref", "subscript", "move", "pointer-assign", "call-site".
struct TransformDiagnostics {
  std::vector<BackOff> backedOff;
  std::map<std::string, int> rewrittenSites;
};

struct TransformResult {
  cast::TranslationUnit tu;
  AdjunctPlan plan;
  TransformDiagnostics diagnostics;
};

/// The transform produced a unit that no longer type checks.
class TransformError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One verdict per pointer-typed parameter or local of every function.
std::vector<PointerClass> classify(const cast::TranslationUnit &tu,
                                   const effects::EffectDatabase &db = effects::EffectDatabase::builtins());

/// Rewrites every `*e` into `e[0]`. The result is type checked.
cast::TranslationUnit normalizeDerefs(const cast::TranslationUnit &tu);

/// Deref normalization followed by the adjunct rewrite. The input must be
/// type checked; the output is.
TransformResult transform(const cast::TranslationUnit &tu,
                          const effects::EffectDatabase &db = effects::EffectDatabase::builtins());

/// base + "_adj" if unused, else base + "_adj" + the smallest counter that is.
/// The result is inserted into `taken`.
std::string freshName(const std::string &base, std::set<std::string> &taken);

/// Every identifier spelled in the unit: functions, records, fields,
/// parameters, locals and the built-in function names.
std::set<std::string> identifiersOf(const cast::TranslationUnit &tu);

} // namespace adj::adjunct
