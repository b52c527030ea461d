// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/adjunct/adjunct.hpp"
#include "adj/cast/cast.hpp"
#include "adj/interp/generator.hpp"

#include "doctest.h"

#include <stdexcept>

using namespace adj;

TEST_CASE("generated programs are deterministic per seed") {
  for (std::uint64_t seed : {0ULL, 1ULL, 77ULL, 123456789ULL}) {
    std::string a = cast::print(interp::generateProgram(seed, 25));
    std::string b = cast::print(interp::generateProgram(seed, 25));
    CHECK(a == b);
  }
  CHECK(cast::print(interp::generateProgram(1, 25)) != cast::print(interp::generateProgram(2, 25)));
}

TEST_CASE("program size is bounded") {
  CHECK_THROWS_AS(interp::generateProgram(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(interp::generateProgram(0, interp::kMaxProgramSize + 1), std::invalid_argument);
  CHECK_NOTHROW(interp::generateProgram(0, interp::kMinProgramSize));
}

TEST_CASE("generated programs run without traps and keep accesses in range") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto tu = interp::generateProgram(seed, 30);
    auto r = interp::run(tu, interp::kGeneratedEntry, interp::generatedInputs(seed), 1000000);
    REQUIRE_MESSAGE(r.ok(), "seed " << seed);
    std::map<int, std::int64_t> lengths;
    for (const auto &e : r.trace.events) {
      if (e.kind == interp::EventKind::Alloc)
        lengths[e.container] = e.offset;
      if (e.kind == interp::EventKind::Read || e.kind == interp::EventKind::Write) {
        CHECK(e.offset >= 0);
        CHECK(e.offset < lengths[e.container]);
      }
    }
  }
}

TEST_CASE("generated programs print and parse back to the same tree") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto tu = interp::generateProgram(seed, 40);
    CHECK(cast::structuralEqual(cast::parse(cast::print(tu)), tu));
  }
}

TEST_CASE("generator covers the rebinding shapes") {
  std::string all;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    all += cast::print(interp::generateProgram(seed, 40));
  for (const char *shape : {" += ", " -= ", "++;", " = step(", " = &", "memcpy(", "int** ", "if (", "for (int",
                            "get(", "put("})
    CHECK_MESSAGE(all.find(shape) != std::string::npos, shape);
}

TEST_CASE("transform preserves traces of generated programs") {
  int diverged = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto tu = interp::generateProgram(seed, 40);
    auto in = interp::generatedInputs(seed);
    auto before = interp::run(tu, interp::kGeneratedEntry, in, 1000000);
    auto after = interp::run(adjunct::transform(tu).tu, interp::kGeneratedEntry, in, 1000000);
    if (!interp::traceEqual(before, after, interp::CompareMode::Strict))
      ++diverged;
  }
  CHECK(diverged == 0);
}
