// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/cast/ast.hpp"
#include "adj/cast/diagnostic.hpp"

#include <utility>

namespace adj::cast {

const std::string &SourceSpan::fileName() const {
  static const std::string unknown = "<input>";
  return file ? *file : unknown;
}

std::string SourceSpan::str() const {
  return fileName() + ":" + std::to_string(line) + ":" + std::to_string(column);
}

CType CType::integer(unsigned bits, bool isSigned) {
  CType t;
  t.kind_ = Kind::Int;
  t.bits_ = bits;
  t.signed_ = isSigned;
  return t;
}

CType CType::floating(unsigned bits) {
  CType t;
  t.kind_ = Kind::Float;
  t.bits_ = bits;
  return t;
}

CType CType::pointerTo(const CType &pointee) {
  CType t;
  t.kind_ = Kind::Pointer;
  t.bits_ = 64;
  t.pointee_ = std::make_shared<const CType>(pointee);
  return t;
}

CType CType::record(std::string name) {
  CType t;
  t.kind_ = Kind::Record;
  t.record_ = std::move(name);
  return t;
}

CType CType::voidType() { return CType{}; }

std::string CType::spelling() const {
  switch (kind_) {
  case Kind::Void:
    return "void";
  case Kind::Float:
    return bits_ == 32 ? "float" : "double";
  case Kind::Record:
    return "struct " + record_;
  case Kind::Pointer:
    return pointee_->spelling() + "*";
  case Kind::Int: {
    std::string base;
    switch (bits_) {
    case 8: base = "char"; break;
    case 16: base = "short"; break;
    case 32: base = "int"; break;
    default: base = "long"; break;
    }
    if (signed_)
      return base;
    return base == "int" ? "unsigned" : "unsigned " + base;
  }
  }
  return "void";
}

bool operator==(const CType &a, const CType &b) {
  if (a.kind_ != b.kind_)
    return false;
  switch (a.kind_) {
  case CType::Kind::Void:
    return true;
  case CType::Kind::Int:
    return a.bits_ == b.bits_ && a.signed_ == b.signed_;
  case CType::Kind::Float:
    return a.bits_ == b.bits_;
  case CType::Kind::Record:
    return a.record_ == b.record_;
  case CType::Kind::Pointer:
    return *a.pointee_ == *b.pointee_;
  }
  return false;
}

const char *spelling(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add: return "+";
  case BinaryOp::Sub: return "-";
  case BinaryOp::Mul: return "*";
  case BinaryOp::Div: return "/";
  case BinaryOp::Rem: return "%";
  case BinaryOp::BitAnd: return "&";
  case BinaryOp::BitOr: return "|";
  case BinaryOp::BitXor: return "^";
  case BinaryOp::Shl: return "<<";
  case BinaryOp::Shr: return ">>";
  case BinaryOp::Lt: return "<";
  case BinaryOp::Gt: return ">";
  case BinaryOp::Le: return "<=";
  case BinaryOp::Ge: return ">=";
  case BinaryOp::Eq: return "==";
  case BinaryOp::Ne: return "!=";
  case BinaryOp::LogAnd: return "&&";
  case BinaryOp::LogOr: return "||";
  }
  return "?";
}

const char *spelling(UnaryOp op) {
  switch (op) {
  case UnaryOp::Neg: return "-";
  case UnaryOp::Not: return "!";
  case UnaryOp::BitNot: return "~";
  }
  return "?";
}

bool isComparison(BinaryOp op) {
  switch (op) {
  case BinaryOp::Lt:
  case BinaryOp::Gt:
  case BinaryOp::Le:
  case BinaryOp::Ge:
  case BinaryOp::Eq:
  case BinaryOp::Ne:
    return true;
  default:
    return false;
  }
}

const char *spelling(AssignOp op) {
  switch (op) {
  case AssignOp::Assign: return "=";
  case AssignOp::AddAssign: return "+=";
  case AssignOp::SubAssign: return "-=";
  }
  return "=";
}

namespace {
Expr make(ExprKind kind, SourceSpan span) {
  Expr e;
  e.kind = kind;
  e.span = std::move(span);
  return e;
}
Stmt makeStmt(StmtKind kind, SourceSpan span) {
  Stmt s;
  s.kind = kind;
  s.span = std::move(span);
  return s;
}
} // namespace

Expr Expr::intLit(std::int64_t v, SourceSpan span) {
  Expr e = make(ExprKind::IntLit, std::move(span));
  e.intValue = v;
  return e;
}

Expr Expr::floatLit(double v, SourceSpan span) {
  Expr e = make(ExprKind::FloatLit, std::move(span));
  e.floatValue = v;
  return e;
}

Expr Expr::ident(std::string name, SourceSpan span) {
  Expr e = make(ExprKind::Ident, std::move(span));
  e.name = std::move(name);
  return e;
}

Expr Expr::subscript(Expr array, Expr index, SourceSpan span) {
  Expr e = make(ExprKind::Subscript, std::move(span));
  e.kids.push_back(std::move(array));
  e.kids.push_back(std::move(index));
  return e;
}

Expr Expr::deref(Expr operand, SourceSpan span) {
  Expr e = make(ExprKind::Deref, std::move(span));
  e.kids.push_back(std::move(operand));
  return e;
}

Expr Expr::addrOf(Expr operand, SourceSpan span) {
  Expr e = make(ExprKind::AddrOf, std::move(span));
  e.kids.push_back(std::move(operand));
  return e;
}

Expr Expr::member(Expr base, std::string field, bool throughPointer, SourceSpan span) {
  Expr e = make(ExprKind::Member, std::move(span));
  e.name = std::move(field);
  e.throughPointer = throughPointer;
  e.kids.push_back(std::move(base));
  return e;
}

Expr Expr::unary(UnaryOp op, Expr operand, SourceSpan span) {
  Expr e = make(ExprKind::Unary, std::move(span));
  e.unOp = op;
  e.kids.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs, SourceSpan span) {
  Expr e = make(ExprKind::Binary, std::move(span));
  e.binOp = op;
  e.kids.push_back(std::move(lhs));
  e.kids.push_back(std::move(rhs));
  return e;
}

Expr Expr::call(std::string callee, std::vector<Expr> args, SourceSpan span) {
  Expr e = make(ExprKind::Call, std::move(span));
  e.name = std::move(callee);
  e.kids = std::move(args);
  return e;
}

Expr Expr::alloc(CType element, Expr count, SourceSpan span) {
  Expr e = make(ExprKind::Alloc, std::move(span));
  e.allocType = std::move(element);
  e.kids.push_back(std::move(count));
  return e;
}

Expr Expr::incDec(Expr target, int delta, bool prefix, SourceSpan span) {
  Expr e = make(ExprKind::IncDec, std::move(span));
  e.delta = delta;
  e.prefix = prefix;
  e.kids.push_back(std::move(target));
  return e;
}

Stmt Stmt::decl(std::string name, CType type, std::optional<Expr> init, SourceSpan span) {
  Stmt s = makeStmt(StmtKind::Decl, std::move(span));
  s.name = std::move(name);
  s.declType = std::move(type);
  if (init)
    s.exprs.push_back(std::move(*init));
  return s;
}

Stmt Stmt::assign(Expr lhs, AssignOp op, Expr rhs, SourceSpan span) {
  Stmt s = makeStmt(StmtKind::Assign, std::move(span));
  s.assignOp = op;
  s.exprs.push_back(std::move(lhs));
  s.exprs.push_back(std::move(rhs));
  return s;
}

Stmt Stmt::exprStmt(Expr e, SourceSpan span) {
  Stmt s = makeStmt(StmtKind::ExprStmt, std::move(span));
  s.exprs.push_back(std::move(e));
  return s;
}

Stmt Stmt::forLoop(std::optional<Stmt> init, Expr cond, std::optional<Stmt> step,
                   std::vector<Stmt> body, SourceSpan span) {
  Stmt s = makeStmt(StmtKind::For, std::move(span));
  if (init)
    s.forInit.push_back(std::move(*init));
  s.exprs.push_back(std::move(cond));
  if (step)
    s.forStep.push_back(std::move(*step));
  s.body = std::move(body);
  return s;
}

Stmt Stmt::whileLoop(Expr cond, std::vector<Stmt> body, SourceSpan span) {
  Stmt s = makeStmt(StmtKind::While, std::move(span));
  s.exprs.push_back(std::move(cond));
  s.body = std::move(body);
  return s;
}

Stmt Stmt::ifStmt(Expr cond, std::vector<Stmt> thenBody, std::optional<std::vector<Stmt>> elseBody,
                  SourceSpan span) {
  Stmt s = makeStmt(StmtKind::If, std::move(span));
  s.exprs.push_back(std::move(cond));
  s.body = std::move(thenBody);
  if (elseBody) {
    s.hasElse = true;
    s.elseBody = std::move(*elseBody);
  }
  return s;
}

Stmt Stmt::returnStmt(std::optional<Expr> value, SourceSpan span) {
  Stmt s = makeStmt(StmtKind::Return, std::move(span));
  if (value)
    s.exprs.push_back(std::move(*value));
  return s;
}

Stmt Stmt::block(std::vector<Stmt> body, SourceSpan span) {
  Stmt s = makeStmt(StmtKind::Block, std::move(span));
  s.body = std::move(body);
  return s;
}

Stmt Stmt::incDec(Expr target, int delta, SourceSpan span) {
  Stmt s = makeStmt(StmtKind::IncDec, std::move(span));
  s.delta = delta;
  s.exprs.push_back(std::move(target));
  return s;
}

const RecordField *RecordDef::field(const std::string &fieldName) const {
  for (const auto &f : fields)
    if (f.name == fieldName)
      return &f;
  return nullptr;
}

int RecordDef::fieldIndex(const std::string &fieldName) const {
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i].name == fieldName)
      return static_cast<int>(i);
  return -1;
}

const Function *TranslationUnit::function(const std::string &fnName) const {
  for (const auto &f : functions)
    if (f.name == fnName)
      return &f;
  return nullptr;
}

Function *TranslationUnit::function(const std::string &fnName) {
  for (auto &f : functions)
    if (f.name == fnName)
      return &f;
  return nullptr;
}

const RecordDef *TranslationUnit::record(const std::string &recName) const {
  for (const auto &r : records)
    if (r.name == recName)
      return &r;
  return nullptr;
}

FrontendError::FrontendError(ErrorKind kind, SourceSpan span, const std::string &message)
    : std::runtime_error(formatDiagnostic(span, Severity::Error, message)), kind_(kind),
      span_(std::move(span)), message_(message) {}

std::string formatDiagnostic(const SourceSpan &span, Severity severity, const std::string &message,
                             bool color) {
  const char *label = severity == Severity::Error     ? "error"
                      : severity == Severity::Warning ? "warning"
                                                      : "note";
  std::string out = span.str() + ": ";
  if (color) {
    const char *code = severity == Severity::Error ? "\033[1;31m" : severity == Severity::Warning ? "\033[1;35m" : "\033[1;36m";
    out += code;
    out += label;
    out += "\033[0m";
  } else {
    out += label;
  }
  return out + ": " + message;
}

} // namespace adj::cast
