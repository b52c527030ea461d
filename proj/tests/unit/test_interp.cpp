// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/cast/cast.hpp"
#include "adj/interp/interp.hpp"
#include "fixtures.hpp"

#include "doctest.h"

#include <map>

using namespace adj;
using interp::CompareMode;
using interp::EventKind;
using interp::Scalar;
using interp::TrapKind;

namespace {

interp::RunResult runSrc(const std::string &src, const std::string &entry, std::vector<Scalar> in = {},
                         std::int64_t fuel = 100000) {
  auto tu = cast::parse(src);
  return interp::run(tu, entry, in, fuel);
}

std::vector<interp::TraceEvent> accesses(const interp::RunResult &r) {
  std::vector<interp::TraceEvent> out;
  for (const auto &e : r.trace.events)
    if (e.kind == EventKind::Read || e.kind == EventKind::Write)
      out.push_back(e);
  return out;
}

std::optional<TrapKind> trapOf(const std::string &body) {
  auto r = runSrc("int f() {\n" + body + "\n}", "f");
  if (r.trap)
    return r.trap->kind;
  return std::nullopt;
}

} // namespace

TEST_CASE("pointer move then subscript reads one cell") {
  // a has 15 elements; p moves 7, then reads 5 further.
  auto r = runSrc("int f(int i, int k) {\n"
                  "  int* a = new int[15];\n"
                  "  for (int j = 0; j < 15; j++) { a[j] = j * 10; }\n"
                  "  int* p = a;\n"
                  "  p += i;\n"
                  "  int x = p[k];\n"
                  "  return x;\n"
                  "}",
                  "f", {Scalar::ofInt(7), Scalar::ofInt(5)});
  REQUIRE(r.ok());
  auto acc = accesses(r);
  REQUIRE(acc.size() == 16);
  const auto &rd = acc.back();
  CHECK(rd.kind == EventKind::Read);
  CHECK(rd.container == 0);
  CHECK(rd.offset == 12);
  CHECK(rd.value == Scalar::ofInt(120));
  CHECK(*r.state.returnValue == interp::Value::ofInt(120));
}

TEST_CASE("empty entry body gives an empty trace") {
  auto r = runSrc("void f() { }", "f");
  CHECK(r.ok());
  CHECK(r.trace.events.empty());
  CHECK_FALSE(r.state.returnValue.has_value());
}

TEST_CASE("traps") {
  CHECK(trapOf("int* a = new int[2]; a[2] = 1; return 0;") == TrapKind::OutOfBounds);
  CHECK(trapOf("int* a = new int[2]; int* p = a + 2; return p[0];") == TrapKind::OutOfBounds);
  CHECK(trapOf("int* a = new int[2]; int* p = a - 1; return p[0];") == TrapKind::OutOfBounds);
  CHECK(trapOf("int* a = new int[2]; return a[1];") == TrapKind::UninitializedRead);
  CHECK(trapOf("int x; return x;") == TrapKind::UninitializedRead);
  CHECK(trapOf("int* a = new int[2]; int* b = new int[2]; long d = a - b; return 0;") == TrapKind::CrossContainer);
  CHECK(trapOf("int* a = new int[2]; int* b = new int[2]; if (a < b) { return 1; } return 0;") ==
        TrapKind::CrossContainer);
  CHECK(trapOf("int i = 0; while (i < 1) { i = i; } return 0;") == TrapKind::FuelExhausted);
  CHECK(trapOf("int z = 0; return 5 / z;") == TrapKind::DivisionByZero);
  CHECK(trapOf("int* a = new int[-1]; return 0;") == TrapKind::BadAllocation);
  CHECK(trapOf("int* a = new int[1]; free(a); a[0] = 1; return 0;") == TrapKind::UseAfterFree);
  CHECK(trapOf("long* a = new long[1]; a += 9223372036854775807; a += 1; return 0;") == TrapKind::OffsetOverflow);
  CHECK(trapOf("int* a = new int[3]; int* p = a + 3; long d = p - a; return d;") == std::nullopt);
}

TEST_CASE("narrow integers wrap on store") {
  auto r = runSrc("int f() { char c = 127; c += 1; unsigned u = 0; u -= 1; long s = c; return s + (u == 4294967295); }",
                  "f");
  REQUIRE(r.ok());
  CHECK(r.state.returnValue->i == -127);
}

TEST_CASE("determinism") {
  std::string src = test::readFixture("pbkdf2.c");
  auto tu = cast::parse(src);
  auto a = interp::run(tu, "entry", {Scalar::ofInt(4), Scalar::ofInt(3)}, 100000);
  auto b = interp::run(tu, "entry", {Scalar::ofInt(4), Scalar::ofInt(3)}, 100000);
  REQUIRE(a.ok());
  CHECK(interp::traceEqual(a, b, CompareMode::Strict));
  CHECK(a.trace.events.size() == b.trace.events.size());
}

TEST_CASE("memory model never records out-of-range accesses") {
  auto tu = cast::parse(test::readFixture("pbkdf2.c"));
  auto r = interp::run(tu, "entry", {Scalar::ofInt(5), Scalar::ofInt(4)}, 100000);
  REQUIRE(r.ok());
  std::map<std::int64_t, std::int64_t> len;
  for (const auto &e : r.trace.events) {
    if (e.kind == EventKind::Alloc)
      len[e.container] = e.offset;
    if (e.kind == EventKind::Read || e.kind == EventKind::Write) {
      CHECK(e.offset >= 0);
      CHECK(e.offset < len.at(e.container));
    }
  }
  for (std::size_t k = 1; k < r.trace.events.size(); ++k)
    CHECK(r.trace.events[k].seq > r.trace.events[k - 1].seq);
}

TEST_CASE("strict and value-level comparison") {
  auto a = runSrc("int f() { int* p = new int[3]; p[0] = 1; p[1] = 2; return p[0] + p[1]; }", "f");
  auto b = runSrc("int f() { int* q = new int[1]; int* p = new int[3]; p[0] = 1; p[1] = 2; return p[0] + p[1]; }", "f");
  CHECK(interp::traceEqual(a, a, CompareMode::Strict));
  CHECK_FALSE(interp::traceEqual(a, b, CompareMode::Strict));
  CHECK(interp::traceEqual(a, b, CompareMode::ValueLevel));
  auto d = interp::firstDivergence(a, b, CompareMode::Strict);
  REQUIRE(d);
  CHECK(d->index == 0);
}

TEST_CASE("builtins") {
  auto r = runSrc("long f() {\n"
                  "  long* a = new long[3]; long* b = new long[3];\n"
                  "  for (int i = 0; i < 3; i++) { a[i] = i + 1; }\n"
                  "  memcpy(b, a, 3);\n"
                  "  long* c = HMAC_CTX_new(); long* d = HMAC_CTX_new();\n"
                  "  HMAC_Update(c, 5); HMAC_CTX_copy(d, c);\n"
                  "  long h = HMAC_Final(d); HMAC_CTX_free(c); HMAC_CTX_free(d);\n"
                  "  return b[0] + b[1] + b[2] + h;\n"
                  "}",
                  "f");
  REQUIRE(r.ok());
  CHECK(r.state.returnValue->i > 6);
  int frees = 0;
  for (const auto &e : r.trace.events)
    frees += e.kind == EventKind::Free;
  CHECK(frees == 2);
  CHECK(r.state.containers.size() == 2);
}

TEST_CASE("address-taken locals live in memory") {
  auto r = runSrc("int f() { int* a = new int[4]; a[2] = 9; int** p = &a; (*p)[2] = 5; a++; return (*p)[1]; }", "f");
  REQUIRE(r.ok());
  CHECK(r.state.returnValue->i == 5);
}

TEST_CASE("records") {
  auto r = runSrc("struct P { int x; double y; };\n"
                  "double f() { struct P* ps = new struct P[2]; ps[1].x = 3; ps->y = 0.5;\n"
                  "  struct P loc; loc.x = 4; return ps[1].x + ps[0].y + loc.x; }",
                  "f");
  REQUIRE(r.ok());
  CHECK(r.state.returnValue->f == doctest::Approx(7.5));
  bool sawField = false;
  for (const auto &e : r.trace.events)
    sawField |= e.field == "y";
  CHECK(sawField);
}

TEST_CASE("permuted execution restores induction variables") {
  std::string src = "int f(int n) {\n"
                    "  int* a = new int[n];\n"
                    "  for (int i = 0; i < n; i++) {\n"
                    "    a[i] = i * i;\n"
                    "  }\n"
                    "  int s = 0;\n"
                    "  for (int i = 0; i < n; i++) { s += a[i] * (i + 1); }\n"
                    "  return s;\n"
                    "}";
  auto tu = cast::parse(src);
  auto base = interp::run(tu, "f", {Scalar::ofInt(6)}, 100000);
  for (auto order : {interp::PermuteSpec::Order::Reversed, interp::PermuteSpec::Order::Random}) {
    interp::RunOptions opts;
    opts.permute = interp::PermuteSpec{3, 3, order, 42, {"i"}};
    auto perm = interp::run(tu, "f", {Scalar::ofInt(6)}, opts);
    REQUIRE(perm.ok());
    CHECK(perm.permutedExecutions == 1);
    CHECK(interp::sameFinalState(base.state, perm.state));
  }
}

TEST_CASE("permuted execution exposes a carried dependence") {
  std::string src = "int f(int n) {\n"
                    "  int* a = new int[n + 1];\n"
                    "  a[0] = 1;\n"
                    "  for (int i = 0; i < n; i++) {\n"
                    "    a[i + 1] = a[i] * 2;\n"
                    "  }\n"
                    "  return a[n];\n"
                    "}";
  auto tu = cast::parse(src);
  auto base = interp::run(tu, "f", {Scalar::ofInt(4)}, 100000);
  interp::RunOptions opts;
  opts.permute = interp::PermuteSpec{4, 3, interp::PermuteSpec::Order::Reversed, 0, {"i"}};
  auto perm = interp::run(tu, "f", {Scalar::ofInt(4)}, opts);
  CHECK_FALSE((perm.ok() && interp::sameFinalState(base.state, perm.state)));
}
