// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Typed AST for the supported C subset. Nodes are plain values: copying a
// node deep-copies its children, so passes can rebuild trees freely.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace adj::cast {

struct SourceSpan {
  std::shared_ptr<const std::string> file;
  std::uint32_t line = 1;
  std::uint32_t column = 1;
  std::uint32_t length = 0;

  const std::string &fileName() const;
  /// "file:line:col"
  std::string str() const;
};

class CType {
public:
  enum class Kind { Int, Float, Pointer, Record, Void };

  CType() = default;

  static CType integer(unsigned bits, bool isSigned);
  static CType floating(unsigned bits);
  static CType pointerTo(const CType &pointee);
  static CType record(std::string name);
  static CType voidType();

  Kind kind() const { return kind_; }
  bool isInt() const { return kind_ == Kind::Int; }
  bool isFloat() const { return kind_ == Kind::Float; }
  bool isArithmetic() const { return isInt() || isFloat(); }
  bool isPointer() const { return kind_ == Kind::Pointer; }
  bool isRecord() const { return kind_ == Kind::Record; }
  bool isVoid() const { return kind_ == Kind::Void; }

  unsigned bits() const { return bits_; }
  bool isSigned() const { return signed_; }
  const CType &pointee() const { return *pointee_; }
  const std::string &recordName() const { return record_; }

  /// Pointer depth: 0 for non-pointers, 1 + pointee order otherwise.
  int order() const { return isPointer() ? 1 + pointee_->order() : 0; }

  /// C spelling of the type, e.g. "unsigned long", "struct M*", "int**".
  std::string spelling() const;

  friend bool operator==(const CType &a, const CType &b);
  friend bool operator!=(const CType &a, const CType &b) { return !(a == b); }

private:
  Kind kind_ = Kind::Void;
  unsigned bits_ = 0;
  bool signed_ = true;
  std::shared_ptr<const CType> pointee_;
  std::string record_;
};

enum class BinaryOp {
  Add, Sub, Mul, Div, Rem,
  BitAnd, BitOr, BitXor, Shl, Shr,
  Lt, Gt, Le, Ge, Eq, Ne,
  LogAnd, LogOr,
};

enum class UnaryOp { Neg, Not, BitNot };

const char *spelling(BinaryOp op);
const char *spelling(UnaryOp op);
bool isComparison(BinaryOp op);

enum class ExprKind {
  IntLit,
  FloatLit,
  Ident,
  Subscript, // kids: [array, index]
  Deref,     // kids: [operand]
  AddrOf,    // kids: [operand]
  Member,    // kids: [base]; name = field; throughPointer for "->"
  Unary,     // kids: [operand]
  Binary,    // kids: [lhs, rhs]
  Call,      // name = callee; kids = args
  Alloc,     // allocType = element type; kids: [count]
  IncDec,    // kids: [target]; delta = +1/-1; prefix
};

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  SourceSpan span;
  CType type; ///< resolved by the type checker

  std::int64_t intValue = 0;
  double floatValue = 0.0;
  std::string name;
  BinaryOp binOp = BinaryOp::Add;
  UnaryOp unOp = UnaryOp::Neg;
  bool throughPointer = false;
  bool prefix = false;
  int delta = 1;
  CType allocType;
  int declId = -1; ///< Ident: index into Function::vars, set by the checker

  std::vector<Expr> kids;

  const Expr &operand(std::size_t i = 0) const { return kids.at(i); }
  Expr &operand(std::size_t i = 0) { return kids.at(i); }

  static Expr intLit(std::int64_t v, SourceSpan span = {});
  static Expr floatLit(double v, SourceSpan span = {});
  static Expr ident(std::string name, SourceSpan span = {});
  static Expr subscript(Expr array, Expr index, SourceSpan span = {});
  static Expr deref(Expr operand, SourceSpan span = {});
  static Expr addrOf(Expr operand, SourceSpan span = {});
  static Expr member(Expr base, std::string field, bool throughPointer, SourceSpan span = {});
  static Expr unary(UnaryOp op, Expr operand, SourceSpan span = {});
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs, SourceSpan span = {});
  static Expr call(std::string callee, std::vector<Expr> args, SourceSpan span = {});
  static Expr alloc(CType element, Expr count, SourceSpan span = {});
  static Expr incDec(Expr target, int delta, bool prefix, SourceSpan span = {});
};

enum class AssignOp { Assign, AddAssign, SubAssign };
const char *spelling(AssignOp op);

enum class StmtKind { Decl, Assign, ExprStmt, For, While, If, Return, Block, IncDec };

struct Stmt {
  StmtKind kind = StmtKind::Block;
  SourceSpan span;

  // Decl
  std::string name;
  CType declType;
  int declId = -1;

  AssignOp assignOp = AssignOp::Assign;
  int delta = 1; ///< IncDec

  /// Decl: [init]?  Assign: [lhs, rhs]  ExprStmt: [e]  For/While/If: [cond]
  /// Return: [value]?  IncDec: [target]
  std::vector<Expr> exprs;

  std::vector<Stmt> forInit; ///< zero or one statement
  std::vector<Stmt> forStep; ///< zero or one statement
  std::vector<Stmt> body;    ///< For/While/Block bodies, If then-branch
  std::vector<Stmt> elseBody;
  bool hasElse = false;

  bool hasInit() const { return kind == StmtKind::Decl && !exprs.empty(); }
  const Expr &init() const { return exprs.at(0); }
  const Expr &lhs() const { return exprs.at(0); }
  const Expr &rhs() const { return exprs.at(1); }
  const Expr &cond() const { return exprs.at(0); }

  static Stmt decl(std::string name, CType type, std::optional<Expr> init, SourceSpan span = {});
  static Stmt assign(Expr lhs, AssignOp op, Expr rhs, SourceSpan span = {});
  static Stmt exprStmt(Expr e, SourceSpan span = {});
  static Stmt forLoop(std::optional<Stmt> init, Expr cond, std::optional<Stmt> step,
                      std::vector<Stmt> body, SourceSpan span = {});
  static Stmt whileLoop(Expr cond, std::vector<Stmt> body, SourceSpan span = {});
  static Stmt ifStmt(Expr cond, std::vector<Stmt> thenBody, std::optional<std::vector<Stmt>> elseBody,
                     SourceSpan span = {});
  static Stmt returnStmt(std::optional<Expr> value, SourceSpan span = {});
  static Stmt block(std::vector<Stmt> body, SourceSpan span = {});
  static Stmt incDec(Expr target, int delta, SourceSpan span = {});
};

/// A declared variable or parameter of one function, indexed by declId.
struct VarInfo {
  std::string name;
  CType type;
  SourceSpan span;
  bool isParam = false;
  bool addressTaken = false;
};

struct Param {
  std::string name;
  CType type;
  SourceSpan span;
  int declId = -1;
};

struct Function {
  std::string name;
  CType returnType;
  std::vector<Param> params;
  std::vector<Stmt> body;
  bool hasBody = true;
  SourceSpan span;

  std::vector<VarInfo> vars; ///< filled by the type checker
};

struct RecordField {
  std::string name;
  CType type;
};

struct RecordDef {
  std::string name;
  std::vector<RecordField> fields;
  SourceSpan span;

  const RecordField *field(const std::string &name) const;
  int fieldIndex(const std::string &name) const;
};

struct TranslationUnit {
  std::string file;
  std::vector<RecordDef> records;
  std::vector<Function> functions;

  const Function *function(const std::string &name) const;
  Function *function(const std::string &name);
  const RecordDef *record(const std::string &name) const;
};

} // namespace adj::cast
