// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/adjunct/adjunct.hpp"
#include "adj/cast/cast.hpp"
#include "adj/interp/interp.hpp"
#include "fixtures.hpp"

#include "doctest.h"

#include <filesystem>
#include <map>

using namespace adj;
using adjunct::Verdict;
using interp::CompareMode;
using interp::Scalar;

namespace {

std::map<std::string, Verdict> verdicts(const std::string &src, const effects::EffectDatabase &db) {
  std::map<std::string, Verdict> out;
  for (const auto &c : adjunct::classify(cast::parse(src), db))
    out[c.function + "." + c.variable] = c.verdict;
  return out;
}

std::map<std::string, Verdict> verdicts(const std::string &src) {
  return verdicts(src, effects::EffectDatabase::builtins());
}

effects::EffectDatabase handoffDb() {
  auto db = effects::EffectDatabase::builtins();
  db.put({"init_pointer", {{0, effects::Effect::Write}}, effects::Special::AllocationDelegation});
  return db;
}

void checkSameTrace(const std::string &src, const std::string &entry, const std::vector<Scalar> &in,
                    const effects::EffectDatabase &db = effects::EffectDatabase::builtins()) {
  auto tu = cast::parse(src);
  auto before = interp::run(tu, entry, in, 1000000);
  auto after = interp::run(adjunct::transform(tu, db).tu, entry, in, 1000000);
  auto div = interp::firstDivergence(before, after, CompareMode::Strict);
  INFO(cast::print(adjunct::transform(tu, db).tu));
  CHECK_MESSAGE(!div, (div ? div->description : ""));
}

} // namespace

TEST_CASE("fresh names avoid every taken identifier") {
  std::set<std::string> taken = {"p", "p_adj", "p_adj1", "q"};
  CHECK(adjunct::freshName("q", taken) == "q_adj");
  CHECK(adjunct::freshName("p", taken) == "p_adj2");
  CHECK(adjunct::freshName("p", taken) == "p_adj3");
  CHECK(taken.count("p_adj3") == 1);
}

TEST_CASE("rewrite rules match the golden outputs") {
  namespace fs = std::filesystem;
  int seen = 0;
  for (const auto &entry : fs::directory_iterator(test::fixturePath("table"))) {
    if (entry.path().extension() != ".c")
      continue;
    std::string name = "table/" + entry.path().filename().string();
    std::string golden = test::readFixture(name.substr(0, name.size() - 2) + ".expected");
    auto tu = cast::parse(test::readFixture(name), name);
    CAPTURE(name);
    CHECK(cast::print(adjunct::transform(tu).tu) == golden);
    ++seen;
  }
  CHECK(seen >= 11);
}

TEST_CASE("pbkdf2 inner loop keeps its container and moves the adjunct") {
  auto tu = cast::parse(test::readFixture("pbkdf2.c"), "pbkdf2.c");
  auto r = adjunct::transform(tu);
  std::string out = cast::print(r.tu);
  CHECK(out.find("p[k + p_adj] = p[k + p_adj] ^ data[k + data_adj];") != std::string::npos);
  CHECK(out.find("p_adj += cplen;") != std::string::npos);
  CHECK(out.find("p += cplen") == std::string::npos);
  checkSameTrace(test::readFixture("pbkdf2.c"), "entry", {Scalar::ofInt(4), Scalar::ofInt(3)});
}

TEST_CASE("decidable and undecidable reassignment") {
  auto d = verdicts(test::readFixture("decidable.c"));
  CHECK(d["fill.p"] == Verdict::Decidable);
  CHECK(d["fill.a"] == Verdict::Decidable);
  auto u = verdicts(test::readFixture("undecidable.c"));
  CHECK(u["fill.p"] == Verdict::ConditionalReassignment);

  auto tu = cast::parse(test::readFixture("undecidable.c"));
  auto r = adjunct::transform(tu);
  REQUIRE(r.diagnostics.backedOff.size() == 1);
  CHECK(r.diagnostics.backedOff[0].pointer == "p");
  CHECK(r.diagnostics.backedOff[0].verdict == Verdict::ConditionalReassignment);
  CHECK(r.plan.find("fill", "p") == nullptr);
  CHECK(cast::structuralEqual(r.tu, cast::parse(test::readFixture("undecidable.c"))));

  checkSameTrace(test::readFixture("decidable.c"), "entry", {Scalar::ofInt(3)});
  checkSameTrace(test::readFixture("undecidable.c"), "entry", {Scalar::ofInt(0), Scalar::ofInt(4)});
}

TEST_CASE("escapes, iterated double pointers and cross-base arithmetic") {
  auto v = verdicts(test::readFixture("escape.c"));
  CHECK(v["entry.a"] == Verdict::AddressTakenEscape);
  CHECK(v["entry.q"] == Verdict::HigherOrderIterated);
  CHECK(v["entry.b"] == Verdict::AddressTakenEscape);
  CHECK(v["entry.s"] == Verdict::UnsupportedArithmetic);
  CHECK(v["entry.t"] == Verdict::UnsupportedArithmetic);
  CHECK(v["sink.slot"] == Verdict::Decidable);
  CHECK(v["sink.v"] == Verdict::Decidable);
}

TEST_CASE("evidence points at the offending site") {
  auto classes = adjunct::classify(cast::parse(test::readFixture("undecidable.c"), "u.c"));
  for (const auto &c : classes) {
    if (c.variable != "p")
      continue;
    REQUIRE(!c.evidence.empty());
    CHECK(c.evidence[0].line == 8);
  }
}

TEST_CASE("allocation delegation resets the adjunct") {
  std::string src = test::readFixture("handoff.c");
  auto v = verdicts(src, handoffDb());
  CHECK(v["main.buf"] == Verdict::Decidable);
  CHECK(v["main.argv"] == Verdict::Decidable);
  CHECK(verdicts(src)["main.buf"] == Verdict::AddressTakenEscape);

  auto r = adjunct::transform(cast::parse(src), handoffDb());
  std::string out = cast::print(r.tu);
  CHECK(out.find("init_pointer(&buf, atoi(argv[1 + argv_adj]));\n  buf_adj = 0;") != std::string::npos);
  CHECK(out.find("memset(p[p_adj], 0, n);") != std::string::npos);
  checkSameTrace(src, "entry", {Scalar::ofInt(5)}, handoffDb());
}

TEST_CASE("pointer comparisons on a shared base use offsets") {
  std::string src = "int sum(int* a, int n) {\n"
                    "  int* end = a + n;\n"
                    "  int s = 0;\n"
                    "  for (int* q = a; q < end; q++) {\n"
                    "    s += *q;\n"
                    "  }\n"
                    "  long d = end - a;\n"
                    "  return s + d;\n"
                    "}\n"
                    "int entry(int n) {\n"
                    "  int* a = new int[n];\n"
                    "  for (int i = 0; i < n; i++) {\n"
                    "    a[i] = i * i;\n"
                    "  }\n"
                    "  return sum(a + 1, n - 1);\n"
                    "}\n";
  std::string out = cast::print(adjunct::transform(cast::parse(src)).tu);
  CHECK(out.find("for (int* q = a; q_adj < end_adj; q_adj++)") != std::string::npos);
  CHECK(out.find("long d = end_adj - a_adj;") != std::string::npos);
  checkSameTrace(src, "entry", {Scalar::ofInt(6)});
}

TEST_CASE("records through pointers and loaded pointers") {
  std::string src = "struct M {\n  int n;\n  int* vals;\n};\n"
                    "int get(struct M* m, int k) {\n"
                    "  m++;\n"
                    "  int* v = m->vals;\n"
                    "  v += 1;\n"
                    "  return m->n + v[k];\n"
                    "}\n"
                    "int entry(int k) {\n"
                    "  struct M* ms = new struct M[2];\n"
                    "  ms[1].n = 3;\n"
                    "  ms[1].vals = new int[4];\n"
                    "  for (int i = 0; i < 4; i++) {\n"
                    "    ms[1].vals[i] = 10 + i;\n"
                    "  }\n"
                    "  return get(ms, k);\n"
                    "}\n";
  std::string out = cast::print(adjunct::transform(cast::parse(src)).tu);
  CHECK(out.find("m[m_adj].n + v[k + v_adj]") != std::string::npos);
  checkSameTrace(src, "entry", {Scalar::ofInt(2)});
}

TEST_CASE("self-referencing rebinding keeps evaluation order") {
  std::string src = "int entry(int n) {\n"
                    "  int* a = new int[8];\n"
                    "  int* p = a;\n"
                    "  for (int i = 0; i < 8; i++) {\n"
                    "    a[i] = i % 3;\n"
                    "  }\n"
                    "  int* b = a + 1;\n"
                    "  p = b + p[2];\n"
                    "  return p[0] + n;\n"
                    "}\n";
  checkSameTrace(src, "entry", {Scalar::ofInt(1)});
}

TEST_CASE("transform output type checks and is stable under a second pass") {
  for (const char *name : {"pbkdf2.c", "decidable.c", "undecidable.c", "handoff.c", "escape.c"}) {
    CAPTURE(name);
    auto once = adjunct::transform(cast::parse(test::readFixture(name)), handoffDb());
    auto twice = adjunct::transform(once.tu, handoffDb());
    auto reparsed = cast::parse(cast::print(twice.tu));
    CHECK(cast::structuralEqual(reparsed, twice.tu));
  }
}

TEST_CASE("adjunct names never collide") {
  std::string src = "int f(int* p, int p_adj) {\n  return p[p_adj];\n}\n"
                    "int g(int* p) {\n  return *p;\n}\n";
  auto r = adjunct::transform(cast::parse(src));
  std::set<std::string> names;
  for (const auto &m : r.plan.mapping) {
    CHECK(m.adjunct != "p_adj");
    CHECK(names.insert(m.adjunct).second);
  }
  CHECK(r.plan.mapping.size() == 2);
}

TEST_CASE("plan mapping covers exactly the decidable pointers") {
  auto r = adjunct::transform(cast::parse(test::readFixture("escape.c")));
  std::size_t decidable = 0;
  for (const auto &c : r.plan.classes)
    if (c.verdict == Verdict::Decidable) {
      ++decidable;
      CHECK(r.plan.find(c.function, c.variable) != nullptr);
    }
  CHECK(r.plan.mapping.size() == decidable);
  CHECK(r.diagnostics.backedOff.size() == r.plan.classes.size() - decidable);
}
