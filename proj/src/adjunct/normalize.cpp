// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/adjunct/adjunct.hpp"

#include "adj/cast/cast.hpp"

namespace adj::adjunct {

namespace {

void normalize(cast::Expr &e) {
  for (auto &k : e.kids)
    normalize(k);
  if (e.kind == cast::ExprKind::Deref) {
    cast::Expr operand = std::move(e.kids[0]);
    cast::SourceSpan span = e.span;
    e = cast::Expr::subscript(std::move(operand), cast::Expr::intLit(0, span), span);
  }
}

void normalize(std::vector<cast::Stmt> &body) {
  for (auto &s : body) {
    for (auto &e : s.exprs)
      normalize(e);
    normalize(s.forInit);
    normalize(s.forStep);
    normalize(s.body);
    normalize(s.elseBody);
  }
}

} // namespace

cast::TranslationUnit normalizeDerefs(const cast::TranslationUnit &tu) {
  cast::TranslationUnit out = tu;
  for (auto &fn : out.functions)
    normalize(fn.body);
  cast::typecheck(out);
  return out;
}

} // namespace adj::adjunct
