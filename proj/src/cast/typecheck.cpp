// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/cast/cast.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace adj::cast {

namespace {
CType voidPtr() { return CType::pointerTo(CType::voidType()); }
CType i32() { return CType::integer(32, true); }
CType i64() { return CType::integer(64, true); }
CType longPtr() { return CType::pointerTo(i64()); }
} // namespace

const std::vector<BuiltinSignature> &builtinSignatures() {
  static const std::vector<BuiltinSignature> table = {
      {"memcpy", CType::voidType(), {voidPtr(), voidPtr(), i64()}},
      {"memset", CType::voidType(), {voidPtr(), i32(), i64()}},
      {"free", CType::voidType(), {voidPtr()}},
      {"atoi", i32(), {CType::pointerTo(CType::integer(8, true))}},
      {"HMAC_CTX_new", longPtr(), {}},
      {"HMAC_CTX_copy", i32(), {longPtr(), longPtr()}},
      {"HMAC_CTX_free", CType::voidType(), {longPtr()}},
      {"HMAC_Update", i32(), {longPtr(), i64()}},
      {"HMAC_Final", i64(), {longPtr()}},
  };
  return table;
}

const BuiltinSignature *findBuiltin(std::string_view name) {
  for (const auto &b : builtinSignatures())
    if (b.name == name)
      return &b;
  return nullptr;
}

namespace {

constexpr int kMaxPointerOrder = 2;

class Checker {
public:
  explicit Checker(TranslationUnit &tu) : tu_(tu) {}

  void run() {
    std::set<std::string> seen;
    for (const auto &rec : tu_.records) {
      if (!seen.insert(rec.name).second)
        fail(rec.span, "redefinition of struct " + rec.name);
      std::set<std::string> fields;
      for (const auto &f : rec.fields) {
        if (!fields.insert(f.name).second)
          fail(rec.span, "duplicate field '" + f.name + "' in struct " + rec.name);
        checkDeclaredType(f.type, rec.span, true);
      }
    }
    std::map<std::string, const Function *> defined;
    for (const auto &fn : tu_.functions) {
      if (findBuiltin(fn.name))
        fail(fn.span, "'" + fn.name + "' is a built-in function and cannot be redeclared");
      auto [it, inserted] = defined.emplace(fn.name, &fn);
      if (!inserted)
        fail(fn.span, "redefinition of function '" + fn.name + "'");
      checkDeclaredType(fn.returnType, fn.span, true, true);
      for (const auto &p : fn.params)
        checkDeclaredType(p.type, p.span, true);
    }
    for (auto &fn : tu_.functions)
      checkFunction(fn);
  }

private:
  [[noreturn]] void fail(const SourceSpan &span, const std::string &msg) const {
    throw FrontendError(ErrorKind::Type, span, msg);
  }

  void checkDeclaredType(const CType &t, const SourceSpan &span, bool allowRecord, bool allowVoid = false) {
    if (t.order() > kMaxPointerOrder)
      throw FrontendError(ErrorKind::Unsupported, span,
                          "unsupported construct: pointer of order " + std::to_string(t.order()));
    if (t.isVoid() && !allowVoid)
      fail(span, "variable of type void");
    const CType *base = &t;
    while (base->isPointer())
      base = &base->pointee();
    if (base->isRecord()) {
      if (!tu_.record(base->recordName()))
        fail(span, "unknown struct '" + base->recordName() + "'");
      if (!allowRecord && !t.isPointer())
        fail(span, "record value not allowed here");
    }
  }

  struct Scope {
    std::map<std::string, int> names;
  };

  void checkFunction(Function &fn) {
    fn_ = &fn;
    fn.vars.clear();
    scopes_.clear();
    scopes_.emplace_back();
    for (auto &p : fn.params) {
      p.declId = declare(p.name, p.type, p.span, true);
    }
    if (fn.hasBody)
      checkBody(fn.body);
    scopes_.clear();
    fn_ = nullptr;
  }

  int declare(const std::string &name, const CType &type, const SourceSpan &span, bool isParam) {
    if (lookup(name) >= 0)
      fail(span, "redeclaration of '" + name + "' (shadowing is outside the subset)");
    if (tu_.function(name) || findBuiltin(name))
      fail(span, "'" + name + "' shadows a function");
    int id = static_cast<int>(fn_->vars.size());
    fn_->vars.push_back(VarInfo{name, type, span, isParam, false});
    scopes_.back().names[name] = id;
    return id;
  }

  int lookup(const std::string &name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->names.find(name);
      if (f != it->names.end())
        return f->second;
    }
    return -1;
  }

  void checkBody(std::vector<Stmt> &body) {
    scopes_.emplace_back();
    for (auto &s : body)
      checkStmt(s);
    scopes_.pop_back();
  }

  void requireCondition(const Expr &e) {
    if (!e.type.isArithmetic())
      fail(e.span, "condition must have arithmetic type, found '" + e.type.spelling() + "'");
  }

  void checkStmt(Stmt &s) {
    switch (s.kind) {
    case StmtKind::Decl: {
      checkDeclaredType(s.declType, s.span, true);
      if (s.hasInit()) {
        checkExpr(s.exprs[0]);
        checkAssignable(s.declType, s.exprs[0], s.span);
      }
      s.declId = declare(s.name, s.declType, s.span, false);
      break;
    }
    case StmtKind::Assign: {
      Expr &lhs = s.exprs[0];
      Expr &rhs = s.exprs[1];
      checkExpr(lhs);
      checkExpr(rhs);
      requireLvalue(lhs);
      if (s.assignOp == AssignOp::Assign) {
        checkAssignable(lhs.type, rhs, s.span);
      } else if (lhs.type.isPointer()) {
        if (!rhs.type.isInt())
          fail(s.span, "pointer compound assignment needs an integer operand");
      } else if (!lhs.type.isArithmetic() || !rhs.type.isArithmetic()) {
        fail(s.span, "compound assignment needs arithmetic operands");
      }
      break;
    }
    case StmtKind::ExprStmt:
      checkExpr(s.exprs[0]);
      break;
    case StmtKind::IncDec: {
      checkExpr(s.exprs[0]);
      requireLvalue(s.exprs[0]);
      const CType &t = s.exprs[0].type;
      if (!t.isInt() && !t.isPointer())
        fail(s.span, "increment of non-integer, non-pointer value");
      break;
    }
    case StmtKind::For: {
      scopes_.emplace_back();
      for (auto &i : s.forInit)
        checkStmt(i);
      checkExpr(s.exprs[0]);
      requireCondition(s.exprs[0]);
      for (auto &st : s.forStep) {
        if (st.kind == StmtKind::Decl)
          fail(st.span, "declaration in for-step");
        checkStmt(st);
      }
      checkBody(s.body);
      scopes_.pop_back();
      break;
    }
    case StmtKind::While:
      checkExpr(s.exprs[0]);
      requireCondition(s.exprs[0]);
      checkBody(s.body);
      break;
    case StmtKind::If:
      checkExpr(s.exprs[0]);
      requireCondition(s.exprs[0]);
      checkBody(s.body);
      if (s.hasElse)
        checkBody(s.elseBody);
      break;
    case StmtKind::Return: {
      const CType &rt = fn_->returnType;
      if (s.exprs.empty()) {
        if (!rt.isVoid())
          fail(s.span, "non-void function '" + fn_->name + "' must return a value");
      } else {
        checkExpr(s.exprs[0]);
        if (rt.isVoid())
          fail(s.span, "void function '" + fn_->name + "' returns a value");
        checkAssignable(rt, s.exprs[0], s.span);
      }
      break;
    }
    case StmtKind::Block:
      checkBody(s.body);
      break;
    }
  }

  static bool isLvalue(const Expr &e) {
    switch (e.kind) {
    case ExprKind::Ident:
    case ExprKind::Subscript:
    case ExprKind::Deref:
      return true;
    case ExprKind::Member:
      return e.throughPointer || isLvalue(e.operand());
    default:
      return false;
    }
  }

  void requireLvalue(const Expr &e) {
    if (!isLvalue(e))
      fail(e.span, "expression is not assignable");
  }

  void checkAssignable(const CType &target, const Expr &value, const SourceSpan &span) {
    const CType &v = value.type;
    if (target.isArithmetic() && v.isArithmetic())
      return;
    if (target.isPointer() && v.isPointer() && target == v)
      return;
    if (target.isRecord() && v.isRecord() && target == v)
      return;
    fail(span, "cannot assign '" + v.spelling() + "' to '" + target.spelling() + "'");
  }

  static CType arithmeticResult(const CType &a, const CType &b) {
    if (a.isFloat() || b.isFloat()) {
      unsigned bits = std::max(a.isFloat() ? a.bits() : 0u, b.isFloat() ? b.bits() : 0u);
      return CType::floating(a.isFloat() && b.isFloat() ? bits : 64);
    }
    unsigned bits = std::max({a.bits(), b.bits(), 32u});
    bool isSigned = true;
    if ((a.bits() == bits && !a.isSigned()) || (b.bits() == bits && !b.isSigned()))
      isSigned = false;
    return CType::integer(bits, isSigned);
  }

  static CType promote(const CType &a) {
    if (a.isInt() && a.bits() < 32)
      return CType::integer(32, true);
    return a;
  }

  const RecordDef &recordOf(const CType &t, const SourceSpan &span) {
    const RecordDef *rec = t.isRecord() ? tu_.record(t.recordName()) : nullptr;
    if (!rec)
      fail(span, "member access on non-record type '" + t.spelling() + "'");
    return *rec;
  }

  void checkExpr(Expr &e) {
    switch (e.kind) {
    case ExprKind::IntLit:
      e.type = (e.intValue >= INT32_MIN && e.intValue <= INT32_MAX) ? i32() : i64();
      return;
    case ExprKind::FloatLit:
      e.type = CType::floating(64);
      return;
    case ExprKind::Ident: {
      int id = lookup(e.name);
      if (id < 0)
        fail(e.span, "use of undeclared identifier '" + e.name + "'");
      e.declId = id;
      e.type = fn_->vars[id].type;
      return;
    }
    case ExprKind::Subscript: {
      checkExpr(e.kids[0]);
      checkExpr(e.kids[1]);
      if (!e.kids[0].type.isPointer())
        fail(e.span, "subscripted value is not a pointer");
      if (!e.kids[1].type.isInt())
        fail(e.kids[1].span, "array subscript is not an integer");
      e.type = e.kids[0].type.pointee();
      if (e.type.isVoid())
        fail(e.span, "subscript of void pointer");
      return;
    }
    case ExprKind::Deref: {
      checkExpr(e.kids[0]);
      if (!e.kids[0].type.isPointer())
        fail(e.span, "indirection requires a pointer operand");
      e.type = e.kids[0].type.pointee();
      if (e.type.isVoid())
        fail(e.span, "dereference of void pointer");
      return;
    }
    case ExprKind::AddrOf: {
      Expr &op = e.kids[0];
      checkExpr(op);
      if (!isLvalue(op))
        fail(e.span, "cannot take the address of an rvalue");
      if (op.type.order() + 1 > kMaxPointerOrder)
        throw FrontendError(ErrorKind::Unsupported, e.span,
                            "unsupported construct: pointer of order " + std::to_string(op.type.order() + 1));
      if (op.kind == ExprKind::Ident)
        fn_->vars[op.declId].addressTaken = true;
      e.type = CType::pointerTo(op.type);
      return;
    }
    case ExprKind::Member: {
      Expr &base = e.kids[0];
      checkExpr(base);
      const CType *rt = &base.type;
      if (e.throughPointer) {
        if (!base.type.isPointer())
          fail(e.span, "'->' on non-pointer");
        rt = &base.type.pointee();
      }
      const RecordDef &rec = recordOf(*rt, e.span);
      const RecordField *f = rec.field(e.name);
      if (!f)
        fail(e.span, "no field '" + e.name + "' in struct " + rec.name);
      e.type = f->type;
      return;
    }
    case ExprKind::Unary: {
      checkExpr(e.kids[0]);
      const CType &t = e.kids[0].type;
      switch (e.unOp) {
      case UnaryOp::Neg:
        if (!t.isArithmetic())
          fail(e.span, "negation of non-arithmetic value");
        e.type = promote(t);
        return;
      case UnaryOp::Not:
        if (!t.isArithmetic())
          fail(e.span, "logical not of non-arithmetic value");
        e.type = i32();
        return;
      case UnaryOp::BitNot:
        if (!t.isInt())
          fail(e.span, "bitwise not of non-integer value");
        e.type = promote(t);
        return;
      }
      return;
    }
    case ExprKind::Binary:
      checkBinary(e);
      return;
    case ExprKind::Call:
      checkCall(e);
      return;
    case ExprKind::Alloc: {
      checkExpr(e.kids[0]);
      if (!e.kids[0].type.isInt())
        fail(e.span, "allocation count must be an integer");
      checkDeclaredType(e.allocType, e.span, true);
      e.type = CType::pointerTo(e.allocType);
      if (e.type.order() > kMaxPointerOrder)
        throw FrontendError(ErrorKind::Unsupported, e.span, "unsupported construct: pointer of order 3");
      return;
    }
    case ExprKind::IncDec: {
      checkExpr(e.kids[0]);
      requireLvalue(e.kids[0]);
      const CType &t = e.kids[0].type;
      if (!t.isInt() && !t.isPointer())
        fail(e.span, "increment of non-integer, non-pointer value");
      e.type = t;
      return;
    }
    }
  }

  void checkBinary(Expr &e) {
    checkExpr(e.kids[0]);
    checkExpr(e.kids[1]);
    const CType &a = e.kids[0].type;
    const CType &b = e.kids[1].type;
    BinaryOp op = e.binOp;
    auto bad = [&]() {
      fail(e.span, std::string("invalid operands to '") + spelling(op) + "' ('" + a.spelling() + "' and '" +
                       b.spelling() + "')");
    };
    if (op == BinaryOp::Add) {
      if (a.isPointer() && b.isInt()) {
        e.type = a;
      } else if (a.isInt() && b.isPointer()) {
        e.type = b;
      } else if (a.isArithmetic() && b.isArithmetic()) {
        e.type = arithmeticResult(a, b);
      } else {
        bad();
      }
      return;
    }
    if (op == BinaryOp::Sub) {
      if (a.isPointer() && b.isInt()) {
        e.type = a;
      } else if (a.isPointer() && b.isPointer()) {
        if (a != b)
          bad();
        e.type = i64();
      } else if (a.isArithmetic() && b.isArithmetic()) {
        e.type = arithmeticResult(a, b);
      } else {
        bad();
      }
      return;
    }
    if (isComparison(op)) {
      if (a.isPointer() || b.isPointer()) {
        if (a != b)
          bad();
      } else if (!a.isArithmetic() || !b.isArithmetic()) {
        bad();
      }
      e.type = i32();
      return;
    }
    if (op == BinaryOp::LogAnd || op == BinaryOp::LogOr) {
      if (!a.isArithmetic() || !b.isArithmetic())
        bad();
      e.type = i32();
      return;
    }
    if (op == BinaryOp::Mul || op == BinaryOp::Div) {
      if (!a.isArithmetic() || !b.isArithmetic())
        bad();
      e.type = arithmeticResult(a, b);
      return;
    }
    // %, bitwise, shifts
    if (!a.isInt() || !b.isInt())
      bad();
    e.type = (op == BinaryOp::Shl || op == BinaryOp::Shr) ? promote(a) : arithmeticResult(a, b);
  }

  void checkCall(Expr &e) {
    for (auto &arg : e.kids)
      checkExpr(arg);
    std::vector<CType> params;
    CType ret;
    if (const Function *fn = tu_.function(e.name)) {
      for (const auto &p : fn->params)
        params.push_back(p.type);
      ret = fn->returnType;
    } else if (const BuiltinSignature *b = findBuiltin(e.name)) {
      params = b->params;
      ret = b->returnType;
    } else {
      fail(e.span, "call to undeclared function '" + e.name + "'");
    }
    if (params.size() != e.kids.size())
      fail(e.span, "function '" + e.name + "' expects " + std::to_string(params.size()) + " arguments, got " +
                       std::to_string(e.kids.size()));
    for (std::size_t i = 0; i < params.size(); ++i) {
      const CType &p = params[i];
      const Expr &arg = e.kids[i];
      if (p.isPointer() && p.pointee().isVoid()) {
        if (!arg.type.isPointer())
          fail(arg.span, "argument " + std::to_string(i + 1) + " of '" + e.name + "' must be a pointer");
        continue;
      }
      checkAssignable(p, arg, arg.span);
    }
    e.type = ret;
  }

  TranslationUnit &tu_;
  Function *fn_ = nullptr;
  std::vector<Scope> scopes_;
};

} // namespace

void typecheck(TranslationUnit &tu) { Checker(tu).run(); }

} // namespace adj::cast
