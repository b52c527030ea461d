// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/adjunct/adjunct.hpp"

#include "adj/cast/cast.hpp"

#include <limits>

namespace adj::adjunct {

std::string freshName(const std::string &base, std::set<std::string> &taken) {
  std::string stem = base + "_adj";
  if (taken.insert(stem).second)
    return stem;
  for (unsigned long k = 1; k < std::numeric_limits<unsigned long>::max(); ++k) {
    std::string candidate = stem + std::to_string(k);
    if (taken.insert(candidate).second)
      return candidate;
  }
  throw TransformError("adjunct names exhausted for '" + base + "'");
}

namespace {

void collect(const cast::Expr &e, std::set<std::string> &out) {
  if (e.kind == cast::ExprKind::Ident || e.kind == cast::ExprKind::Call || e.kind == cast::ExprKind::Member)
    out.insert(e.name);
  for (const auto &k : e.kids)
    collect(k, out);
}

void collect(const std::vector<cast::Stmt> &body, std::set<std::string> &out) {
  for (const auto &s : body) {
    if (s.kind == cast::StmtKind::Decl)
      out.insert(s.name);
    for (const auto &e : s.exprs)
      collect(e, out);
    collect(s.forInit, out);
    collect(s.forStep, out);
    collect(s.body, out);
    collect(s.elseBody, out);
  }
}

} // namespace

std::set<std::string> identifiersOf(const cast::TranslationUnit &tu) {
  std::set<std::string> out;
  for (const auto &b : cast::builtinSignatures())
    out.insert(b.name);
  for (const auto &r : tu.records) {
    out.insert(r.name);
    for (const auto &f : r.fields)
      out.insert(f.name);
  }
  for (const auto &fn : tu.functions) {
    out.insert(fn.name);
    for (const auto &p : fn.params)
      out.insert(p.name);
    collect(fn.body, out);
  }
  return out;
}

const char *verdictName(Verdict v) {
  switch (v) {
  case Verdict::Decidable: return "decidable";
  case Verdict::ConditionalReassignment: return "conditional-reassignment";
  case Verdict::AddressTakenEscape: return "address-taken-escape";
  case Verdict::HigherOrderIterated: return "higher-order-iterated";
  case Verdict::UnsupportedArithmetic: return "unsupported-arithmetic";
  }
  return "?";
}

const AdjunctEntry *AdjunctPlan::find(const std::string &function, const std::string &pointer) const {
  for (const auto &e : mapping)
    if (e.function == function && e.pointer == pointer)
      return &e;
  return nullptr;
}

} // namespace adj::adjunct
