// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/scan/scan.hpp"
#include "fixtures.hpp"

#include "doctest.h"
#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <random>

using namespace adj;
using nlohmann::json;

namespace {

std::vector<std::string> corpus() {
  std::vector<std::string> out;
  for (const auto &e : std::filesystem::directory_iterator(test::fixturePath("scan")))
    if (e.path().extension() == ".c")
      out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

scan::Counts countsOf(const json &j) {
  scan::Counts c;
  c.loc = j.at("loc");
  c.applicable = j.at("applicable");
  c.nonApplicable = j.at("non_applicable");
  for (const auto &[k, v] : j.at("exemptions").items())
    c.exemptions[k] = v;
  return c;
}

} // namespace

TEST_CASE("line counting") {
  CHECK(scan::countLoc("") == 0);
  CHECK(scan::countLoc("\n\n  \n") == 0);
  CHECK(scan::countLoc("int x;\n// c\n  /* a\n b */\nint y; // t\n") == 2);
  CHECK(scan::countLoc("/* a */ int x;\nint y; /* b\n*/\n") == 2);
  CHECK(scan::countLoc("char* s = \"// not a comment\";\n") == 1);
  CHECK(scan::countLoc("char c = '\"';\n// x\n") == 1);
  CHECK(scan::countLoc("int z;") == 1);
}

TEST_CASE("pointer handoff is fully exempt") {
  auto r = scan::scanSource(test::readFixture("handoff.c"), "handoff.c");
  REQUIRE(r.status == scan::FileStatus::Ok);
  CHECK(r.counts.nonApplicable == 0);
  CHECK(r.counts.exemptions.at(scan::kAllocationDelegation) == 1);
  CHECK(r.counts.exemptions.at(scan::kArgv) == 1);
  CHECK(r.counts.applicable == 2);
}

TEST_CASE("moving slot pointer is not applicable") {
  auto r = scan::scanSource(test::readFixture("scan/arrays.c"), "arrays.c");
  CHECK(r.counts.nonApplicable >= 1);
  bool found = false;
  for (const auto &f : r.findings)
    if (f.variable == "p") {
      found = true;
      CHECK(f.category == scan::Category::NonApplicable);
      CHECK(f.order == 2);
    }
  CHECK(found);
}

TEST_CASE("argv outside main is an ordinary pointer") {
  auto r = scan::scanSource("int f(char** argv) {\n  argv++;\n  return 0;\n}\n", "f.c");
  CHECK(r.counts.nonApplicable == 1);
  CHECK(r.counts.exemptions.at(scan::kArgv) == 0);
}

TEST_CASE("delegation needs an allocation through the first cell") {
  auto r = scan::scanSource("void g(int** p, int* q) {\n  *p = q;\n}\n", "g.c");
  CHECK(r.counts.exemptions.at(scan::kAllocationDelegation) == 0);
  CHECK(r.counts.applicable == 2);
}

TEST_CASE("mini-corpus matches the manifest") {
  auto manifest = json::parse(test::readFixture("scan/manifest.json"));
  auto rep = scan::scan(corpus());
  REQUIRE(rep.files.size() == manifest.at("files").size());
  for (const auto &f : rep.files) {
    auto name = std::filesystem::path(f.path).filename().string();
    CAPTURE(name);
    const auto &m = manifest.at("files").at(name);
    CHECK(scan::fileStatusName(f.status) == m.at("status").get<std::string>());
    CHECK(f.counts == countsOf(m));
  }
  CHECK(rep.total == countsOf(manifest.at("total")));
}

TEST_CASE("every pointer is counted once") {
  for (const auto &path : corpus()) {
    auto r = scan::scan({path}).files.at(0);
    long exempt = 0;
    for (const auto &[k, v] : r.counts.exemptions)
      exempt += v;
    CHECK(static_cast<long>(r.findings.size()) == r.counts.applicable + r.counts.nonApplicable + exempt);
  }
}

TEST_CASE("scan order does not matter") {
  auto paths = corpus();
  auto ref = scan::scan(paths);
  std::mt19937 rng(7);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(paths.begin(), paths.end(), rng);
    auto got = scan::scan(paths);
    REQUIRE(got.files.size() == ref.files.size());
    for (std::size_t i = 0; i < got.files.size(); ++i) {
      CHECK(got.files[i].path == ref.files[i].path);
      CHECK(got.files[i].counts == ref.files[i].counts);
    }
    CHECK(got.total == ref.total);
  }
}

TEST_CASE("unreadable files are reported") {
  auto rep = scan::scan({test::fixturePath("scan/missing.c"), test::fixturePath("scan/rows.c")});
  REQUIRE(rep.files.size() == 2);
  CHECK(rep.files[0].status == scan::FileStatus::IoError);
  CHECK(rep.files[1].status == scan::FileStatus::Ok);
  CHECK(rep.total == rep.files[1].counts);
}
