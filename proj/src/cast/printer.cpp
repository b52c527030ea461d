// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/cast/cast.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace adj::cast {

namespace {

constexpr int kPrecPostfix = 15;
constexpr int kPrecUnary = 14;

int precedence(BinaryOp op) {
  switch (op) {
  case BinaryOp::Mul:
  case BinaryOp::Div:
  case BinaryOp::Rem:
    return 13;
  case BinaryOp::Add:
  case BinaryOp::Sub:
    return 12;
  case BinaryOp::Shl:
  case BinaryOp::Shr:
    return 11;
  case BinaryOp::Lt:
  case BinaryOp::Gt:
  case BinaryOp::Le:
  case BinaryOp::Ge:
    return 10;
  case BinaryOp::Eq:
  case BinaryOp::Ne:
    return 9;
  case BinaryOp::BitAnd:
    return 8;
  case BinaryOp::BitXor:
    return 7;
  case BinaryOp::BitOr:
    return 6;
  case BinaryOp::LogAnd:
    return 5;
  case BinaryOp::LogOr:
    return 4;
  }
  return 0;
}

int precedence(const Expr &e) {
  switch (e.kind) {
  case ExprKind::IntLit:
    return e.intValue < 0 ? kPrecUnary : kPrecPostfix + 1;
  case ExprKind::FloatLit:
    return e.floatValue < 0 || std::signbit(e.floatValue) ? kPrecUnary : kPrecPostfix + 1;
  case ExprKind::Ident:
    return kPrecPostfix + 1;
  case ExprKind::Subscript:
  case ExprKind::Member:
  case ExprKind::Call:
    return kPrecPostfix;
  case ExprKind::IncDec:
    return e.prefix ? kPrecUnary : kPrecPostfix;
  case ExprKind::Deref:
  case ExprKind::AddrOf:
  case ExprKind::Unary:
  case ExprKind::Alloc:
    return kPrecUnary;
  case ExprKind::Binary:
    return precedence(e.binOp);
  }
  return 0;
}

std::string formatFloat(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos)
    s += ".0";
  return s;
}

void printExpr(std::ostream &os, const Expr &e);

void printWrapped(std::ostream &os, const Expr &e, bool paren) {
  if (paren)
    os << '(';
  printExpr(os, e);
  if (paren)
    os << ')';
}

void printExpr(std::ostream &os, const Expr &e) {
  int prec = precedence(e);
  switch (e.kind) {
  case ExprKind::IntLit:
    os << e.intValue;
    return;
  case ExprKind::FloatLit:
    os << formatFloat(e.floatValue);
    return;
  case ExprKind::Ident:
    os << e.name;
    return;
  case ExprKind::Subscript:
    printWrapped(os, e.kids[0], precedence(e.kids[0]) < kPrecPostfix);
    os << '[';
    printExpr(os, e.kids[1]);
    os << ']';
    return;
  case ExprKind::Member:
    printWrapped(os, e.kids[0], precedence(e.kids[0]) < kPrecPostfix);
    os << (e.throughPointer ? "->" : ".") << e.name;
    return;
  case ExprKind::Call:
    os << e.name << '(';
    for (std::size_t i = 0; i < e.kids.size(); ++i) {
      if (i)
        os << ", ";
      printExpr(os, e.kids[i]);
    }
    os << ')';
    return;
  case ExprKind::IncDec: {
    const char *op = e.delta > 0 ? "++" : "--";
    if (e.prefix) {
      os << op;
      printWrapped(os, e.kids[0], precedence(e.kids[0]) < kPrecUnary);
    } else {
      printWrapped(os, e.kids[0], precedence(e.kids[0]) < kPrecPostfix);
      os << op;
    }
    return;
  }
  case ExprKind::Deref:
  case ExprKind::AddrOf:
  case ExprKind::Unary: {
    const char *op = e.kind == ExprKind::Deref ? "*" : e.kind == ExprKind::AddrOf ? "&" : spelling(e.unOp);
    os << op;
    const Expr &k = e.kids[0];
    bool paren = precedence(k) < kPrecUnary;
    // Avoid "--x" or "**" style token merges with a negative operand.
    if (!paren && e.kind == ExprKind::Unary && e.unOp == UnaryOp::Neg &&
        ((k.kind == ExprKind::IntLit && k.intValue < 0) || (k.kind == ExprKind::FloatLit && std::signbit(k.floatValue)) ||
         (k.kind == ExprKind::Unary && k.unOp == UnaryOp::Neg) || (k.kind == ExprKind::IncDec && k.prefix)))
      paren = true;
    if (!paren && e.kind == ExprKind::AddrOf && k.kind == ExprKind::AddrOf)
      paren = true;
    printWrapped(os, k, paren);
    return;
  }
  case ExprKind::Alloc:
    os << "new " << e.allocType.spelling() << '[';
    printExpr(os, e.kids[0]);
    os << ']';
    return;
  case ExprKind::Binary: {
    const Expr &l = e.kids[0];
    const Expr &r = e.kids[1];
    printWrapped(os, l, precedence(l) < prec);
    os << ' ' << spelling(e.binOp) << ' ';
    printWrapped(os, r, precedence(r) <= prec);
    return;
  }
  }
}

void indentTo(std::ostream &os, int indent) {
  for (int i = 0; i < indent; ++i)
    os << "  ";
}

void printDeclHead(std::ostream &os, const CType &type, const std::string &name) {
  os << type.spelling() << ' ' << name;
}

// A statement without its terminating ';', as used in for headers.
void printSimple(std::ostream &os, const Stmt &s) {
  switch (s.kind) {
  case StmtKind::Decl:
    printDeclHead(os, s.declType, s.name);
    if (s.hasInit()) {
      os << " = ";
      printExpr(os, s.init());
    }
    return;
  case StmtKind::Assign:
    printExpr(os, s.lhs());
    os << ' ' << spelling(s.assignOp) << ' ';
    printExpr(os, s.rhs());
    return;
  case StmtKind::ExprStmt:
    printExpr(os, s.exprs[0]);
    return;
  case StmtKind::IncDec: {
    const Expr &t = s.exprs[0];
    printWrapped(os, t, precedence(t) < kPrecPostfix);
    os << (s.delta > 0 ? "++" : "--");
    return;
  }
  default:
    return;
  }
}

void printStmt(std::ostream &os, const Stmt &s, int indent);

void printBody(std::ostream &os, const std::vector<Stmt> &body, int indent) {
  os << "{\n";
  for (const auto &st : body)
    printStmt(os, st, indent + 1);
  indentTo(os, indent);
  os << '}';
}

void printStmt(std::ostream &os, const Stmt &s, int indent) {
  indentTo(os, indent);
  switch (s.kind) {
  case StmtKind::Decl:
  case StmtKind::Assign:
  case StmtKind::ExprStmt:
  case StmtKind::IncDec:
    printSimple(os, s);
    os << ";\n";
    return;
  case StmtKind::Return:
    os << "return";
    if (!s.exprs.empty()) {
      os << ' ';
      printExpr(os, s.exprs[0]);
    }
    os << ";\n";
    return;
  case StmtKind::Block:
    printBody(os, s.body, indent);
    os << '\n';
    return;
  case StmtKind::While:
    os << "while (";
    printExpr(os, s.cond());
    os << ") ";
    printBody(os, s.body, indent);
    os << '\n';
    return;
  case StmtKind::For:
    os << "for (";
    if (!s.forInit.empty())
      printSimple(os, s.forInit[0]);
    os << "; ";
    printExpr(os, s.cond());
    os << ';';
    if (!s.forStep.empty()) {
      os << ' ';
      printSimple(os, s.forStep[0]);
    }
    os << ") ";
    printBody(os, s.body, indent);
    os << '\n';
    return;
  case StmtKind::If: {
    const Stmt *cur = &s;
    while (true) {
      os << "if (";
      printExpr(os, cur->cond());
      os << ") ";
      printBody(os, cur->body, indent);
      if (!cur->hasElse)
        break;
      os << " else ";
      if (cur->elseBody.size() == 1 && cur->elseBody[0].kind == StmtKind::If) {
        cur = &cur->elseBody[0];
        continue;
      }
      printBody(os, cur->elseBody, indent);
      break;
    }
    os << '\n';
    return;
  }
  }
}

} // namespace

std::string print(const Expr &expr) {
  std::ostringstream os;
  printExpr(os, expr);
  return os.str();
}

std::string print(const Stmt &stmt, int indent) {
  std::ostringstream os;
  printStmt(os, stmt, indent);
  return os.str();
}

std::string print(const TranslationUnit &tu) {
  std::ostringstream os;
  bool first = true;
  for (const auto &rec : tu.records) {
    if (!first)
      os << '\n';
    first = false;
    os << "struct " << rec.name << " {\n";
    for (const auto &f : rec.fields) {
      indentTo(os, 1);
      printDeclHead(os, f.type, f.name);
      os << ";\n";
    }
    os << "};\n";
  }
  for (const auto &fn : tu.functions) {
    if (!first)
      os << '\n';
    first = false;
    os << fn.returnType.spelling() << ' ' << fn.name << '(';
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      if (i)
        os << ", ";
      printDeclHead(os, fn.params[i].type, fn.params[i].name);
    }
    os << ')';
    if (!fn.hasBody) {
      os << ";\n";
      continue;
    }
    os << ' ';
    printBody(os, fn.body, 0);
    os << '\n';
  }
  return os.str();
}

} // namespace adj::cast
