// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/cast/cast.hpp"

#include <cstring>

namespace adj::cast {

namespace {
bool sameFloat(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
} // namespace

bool structuralEqual(const Expr &a, const Expr &b) {
  if (a.kind != b.kind || a.kids.size() != b.kids.size())
    return false;
  switch (a.kind) {
  case ExprKind::IntLit:
    if (a.intValue != b.intValue)
      return false;
    break;
  case ExprKind::FloatLit:
    if (!sameFloat(a.floatValue, b.floatValue))
      return false;
    break;
  case ExprKind::Ident:
  case ExprKind::Call:
    if (a.name != b.name)
      return false;
    break;
  case ExprKind::Member:
    if (a.name != b.name || a.throughPointer != b.throughPointer)
      return false;
    break;
  case ExprKind::Unary:
    if (a.unOp != b.unOp)
      return false;
    break;
  case ExprKind::Binary:
    if (a.binOp != b.binOp)
      return false;
    break;
  case ExprKind::Alloc:
    if (a.allocType != b.allocType)
      return false;
    break;
  case ExprKind::IncDec:
    if (a.delta != b.delta || a.prefix != b.prefix)
      return false;
    break;
  default:
    break;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!structuralEqual(a.kids[i], b.kids[i]))
      return false;
  return true;
}

bool structuralEqual(const std::vector<Stmt> &a, const std::vector<Stmt> &b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!structuralEqual(a[i], b[i]))
      return false;
  return true;
}

bool structuralEqual(const Stmt &a, const Stmt &b) {
  if (a.kind != b.kind || a.exprs.size() != b.exprs.size())
    return false;
  switch (a.kind) {
  case StmtKind::Decl:
    if (a.name != b.name || a.declType != b.declType)
      return false;
    break;
  case StmtKind::Assign:
    if (a.assignOp != b.assignOp)
      return false;
    break;
  case StmtKind::IncDec:
    if (a.delta != b.delta)
      return false;
    break;
  case StmtKind::If:
    if (a.hasElse != b.hasElse || !structuralEqual(a.elseBody, b.elseBody))
      return false;
    break;
  default:
    break;
  }
  for (std::size_t i = 0; i < a.exprs.size(); ++i)
    if (!structuralEqual(a.exprs[i], b.exprs[i]))
      return false;
  return structuralEqual(a.forInit, b.forInit) && structuralEqual(a.forStep, b.forStep) &&
         structuralEqual(a.body, b.body);
}

bool structuralEqual(const Function &a, const Function &b) {
  if (a.name != b.name || a.returnType != b.returnType || a.hasBody != b.hasBody ||
      a.params.size() != b.params.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].name != b.params[i].name || a.params[i].type != b.params[i].type)
      return false;
  return structuralEqual(a.body, b.body);
}

bool structuralEqual(const TranslationUnit &a, const TranslationUnit &b) {
  if (a.records.size() != b.records.size() || a.functions.size() != b.functions.size())
    return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto &ra = a.records[i];
    const auto &rb = b.records[i];
    if (ra.name != rb.name || ra.fields.size() != rb.fields.size())
      return false;
    for (std::size_t j = 0; j < ra.fields.size(); ++j)
      if (ra.fields[j].name != rb.fields[j].name || ra.fields[j].type != rb.fields[j].type)
        return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i)
    if (!structuralEqual(a.functions[i], b.functions[i]))
      return false;
  return true;
}

} // namespace adj::cast
