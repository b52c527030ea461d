// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/cast/cast.hpp"
#include "fixtures.hpp"

#include "doctest.h"

#include <algorithm>

using namespace adj::cast;

namespace {

const Stmt &onlyStmt(const TranslationUnit &tu) {
  REQUIRE(tu.functions.size() == 1);
  REQUIRE(tu.functions[0].body.size() == 1);
  return tu.functions[0].body[0];
}

void checkSpans(const Expr &e, std::size_t lines) {
  CHECK(e.span.line >= 1);
  CHECK(e.span.line <= lines);
  CHECK(e.span.column >= 1);
  for (const auto &k : e.kids)
    checkSpans(k, lines);
}

void checkSpans(const std::vector<Stmt> &body, std::size_t lines) {
  for (const auto &s : body) {
    CHECK(s.span.line >= 1);
    CHECK(s.span.line <= lines);
    CHECK(s.span.column >= 1);
    for (const auto &e : s.exprs)
      checkSpans(e, lines);
    checkSpans(s.forInit, lines);
    checkSpans(s.forStep, lines);
    checkSpans(s.body, lines);
    checkSpans(s.elseBody, lines);
  }
}

} // namespace

TEST_CASE("minimal declaration") {
  auto tu = parse("void f() { int x = 0; }");
  const Stmt &s = onlyStmt(tu);
  CHECK(s.kind == StmtKind::Decl);
  CHECK(s.name == "x");
  CHECK(s.declType == CType::integer(32, true));
  REQUIRE(s.hasInit());
  CHECK(s.init().intValue == 0);
  CHECK(print(s) == "int x = 0;\n");
}

TEST_CASE("pbkdf2 loop shape") {
  auto tu = parse(adj::test::readFixture("pbkdf2.c"));
  const Function *fn = tu.function("pbkdf2_xor");
  REQUIRE(fn);
  REQUIRE(fn->body.size() == 1);
  const Stmt &outer = fn->body[0];
  REQUIRE(outer.kind == StmtKind::For);
  REQUIRE(outer.body.size() == 2);
  const Stmt &inner = outer.body[0];
  REQUIRE(inner.kind == StmtKind::For);
  REQUIRE(inner.body.size() == 1);
  const Stmt &xorStmt = inner.body[0];
  CHECK(xorStmt.kind == StmtKind::Assign);
  CHECK(xorStmt.rhs().kind == ExprKind::Binary);
  CHECK(xorStmt.rhs().binOp == BinaryOp::BitXor);
  const Stmt &step = outer.body[1];
  CHECK(step.kind == StmtKind::Assign);
  CHECK(step.assignOp == AssignOp::AddAssign);
  CHECK(print(step) == "p += cplen;\n");
  REQUIRE(outer.forStep.size() == 1);
  CHECK(outer.forStep[0].assignOp == AssignOp::AddAssign);
}

TEST_CASE("conditional branch with pointer increment") {
  auto tu = parse("void f(int* ptr, int exp) { int* x; int* y;\n"
                  "if (exp) { x = ptr++; } else { y = ptr + 2; } }");
  const Stmt &s = tu.functions[0].body[2];
  REQUIRE(s.kind == StmtKind::If);
  REQUIRE(s.hasElse);
  const Expr &inc = s.body[0].rhs();
  CHECK(inc.kind == ExprKind::IncDec);
  CHECK(inc.delta == 1);
  CHECK_FALSE(inc.prefix);
  CHECK(inc.type.isPointer());
  const Expr &add = s.elseBody[0].rhs();
  CHECK(add.kind == ExprKind::Binary);
  CHECK(add.binOp == BinaryOp::Add);
  CHECK(add.type.isPointer());
}

TEST_CASE("subscript with sum index prints in source order") {
  auto tu = parse("void f(char* p, int k) { long p_adj = 0; p[k + p_adj] = 1; }");
  CHECK(print(tu.functions[0].body[1]) == "p[k + p_adj] = 1;\n");
}

TEST_CASE("operand order is significant for structural equality") {
  auto a = parse("void f(int* p, int i) { long p_adj = 0; p[i + p_adj] = 0; }");
  auto b = parse("void f(int* p, int i) { long p_adj = 0; p[p_adj + i] = 0; }");
  CHECK(structuralEqual(a, a));
  CHECK_FALSE(structuralEqual(a, b));
}

TEST_CASE("round trip of fixtures") {
  for (const char *name : {"pbkdf2.c"}) {
    CAPTURE(name);
    auto tu = parse(adj::test::readFixture(name));
    auto text = print(tu);
    auto again = parse(text);
    CHECK(structuralEqual(tu, again));
    CHECK(print(again) == text);
  }
}

TEST_CASE("round trip keeps precedence") {
  const char *src = "int f(int a, int b, int c) {\n"
                    "  int x = (a + b) * c;\n"
                    "  int y = a - (b - c);\n"
                    "  int z = -a + ~b - !c;\n"
                    "  int w = a << 2 | b & c ^ 1;\n"
                    "  if (a < b && b < c || c == 0) {\n"
                    "    x += 1;\n"
                    "  } else if (a) {\n"
                    "    x -= 2;\n"
                    "  } else {\n"
                    "    x = 3;\n"
                    "  }\n"
                    "  double d = 1.5e3 + 0.25;\n"
                    "  return x + y + z + w + a % 3;\n"
                    "}\n";
  auto tu = parse(src);
  auto again = parse(print(tu));
  CHECK(structuralEqual(tu, again));
  CHECK(print(tu).find("} else if (a) {") != std::string::npos);
}

TEST_CASE("spans stay within the source") {
  std::string src = adj::test::readFixture("pbkdf2.c");
  std::size_t lines = 1 + static_cast<std::size_t>(std::count(src.begin(), src.end(), '\n'));
  auto tu = parse(src, "pbkdf2.c");
  for (const auto &fn : tu.functions)
    checkSpans(fn.body, lines);
  CHECK(tu.functions[0].body[0].span.line == 2);
  CHECK(tu.functions[0].body[0].span.column == 3);
}

TEST_CASE("parse is deterministic") {
  std::string src = adj::test::readFixture("pbkdf2.c");
  CHECK(structuralEqual(parse(src), parse(src)));
}

TEST_CASE("records, members and allocation") {
  auto tu = parse("struct M { int n; double** rows; };\n"
                  "double g(struct M* m) { m->rows = new double*[m->n];\n"
                  "  m->rows[0] = new double[4]; m->rows[0][1] = 2.0; return m->rows[0][1]; }");
  REQUIRE(tu.records.size() == 1);
  CHECK(tu.records[0].fields[1].type.order() == 2);
  const Stmt &s = tu.functions[0].body[0];
  CHECK(s.rhs().kind == ExprKind::Alloc);
  CHECK(s.rhs().type.order() == 2);
  auto again = parse(print(tu));
  CHECK(structuralEqual(tu, again));
}

TEST_CASE("diagnostics") {
  auto kindOf = [](const std::string &src) {
    try {
      parse(src, "t.c");
    } catch (const FrontendError &e) {
      CHECK(std::string(e.what()).rfind("t.c:", 0) == 0);
      return e.kind();
    }
    FAIL("accepted: " << src);
    return ErrorKind::Syntax;
  };
  CHECK(kindOf("void f() { int x = 0 }") == ErrorKind::Syntax);
  CHECK(kindOf("void f() { goto l; }") == ErrorKind::Unsupported);
  CHECK(kindOf("void f(int x) { switch (x) { } }") == ErrorKind::Unsupported);
  CHECK(kindOf("void f(int* p) { long* q = (long*)p; }") == ErrorKind::Unsupported);
  CHECK(kindOf("void f() { int*** p; }") == ErrorKind::Unsupported);
  CHECK(kindOf("void f() { x = 1; }") == ErrorKind::Type);
  CHECK(kindOf("void f(int* p) { double* q = p; }") == ErrorKind::Type);
  CHECK(kindOf("int f() { return; }") == ErrorKind::Type);
  CHECK(kindOf("void f() { int x; int x; }") == ErrorKind::Type);
}

TEST_CASE("sibling scopes may reuse names") {
  CHECK_NOTHROW(parse("void f() { for (int i = 0; i < 2; i++) { } for (int i = 0; i < 2; i++) { } }"));
}

TEST_CASE("address of marks the variable") {
  auto tu = parse("void f() { int a = 1; int* p = &a; }");
  CHECK(tu.functions[0].vars[0].addressTaken);
  CHECK_FALSE(tu.functions[0].vars[1].addressTaken);
}
