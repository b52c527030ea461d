// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion.

#include "adj/adjunct/adjunct.hpp"
#include "adj/cast/cast.hpp"
#include "adj/depend/depend.hpp"
#include "adj/interp/generator.hpp"
#include "adj/interp/interp.hpp"
#include "adj/patterns/lil.hpp"
#include "adj/scan/scan.hpp"
#include "fixtures.hpp"
#include "soundness.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace adj;
using interp::CompareMode;
using interp::Scalar;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Failures {
public:
  void add(const std::string &what) {
    if (items_.size() < 5)
      items_.push_back(what);
    ++count_;
  }
  bool empty() const { return count_ == 0; }
  std::string str() const {
    std::ostringstream os;
    os << count_ << " failure(s)";
    for (const auto &i : items_)
      os << "; " << i;
    return os.str();
  }

private:
  std::vector<std::string> items_;
  long count_ = 0;
};

double seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::vector<std::vector<Scalar>> ints(std::initializer_list<std::initializer_list<long>> sets) {
  std::vector<std::vector<Scalar>> out;
  for (const auto &s : sets) {
    std::vector<Scalar> v;
    for (long x : s)
      v.push_back(Scalar::ofInt(x));
    out.push_back(v);
  }
  return out;
}

Outcome tableGoldens() {
  auto start = std::chrono::steady_clock::now();
  Failures f;
  int rows = 0;
  std::vector<fs::path> inputs;
  for (const auto &e : fs::directory_iterator(test::fixturePath("table")))
    if (e.path().extension() == ".c")
      inputs.push_back(e.path());
  std::sort(inputs.begin(), inputs.end());
  for (const auto &p : inputs) {
    auto name = p.filename().string();
    auto golden = p;
    golden.replace_extension(".expected");
    try {
      auto out = adjunct::transform(cast::parse(test::readFixture("table/" + name), name)).tu;
      auto want = cast::parse(test::readFixture("table/" + golden.filename().string()));
      if (!cast::structuralEqual(out, want))
        f.add(name + " differs from golden");
      ++rows;
    } catch (const std::exception &e) {
      f.add(name + ": " + e.what());
    }
  }
  double t = seconds(start);
  if (rows < 8)
    f.add("only " + std::to_string(rows) + " table rows");
  if (t >= 1.0)
    f.add("took " + std::to_string(t) + " s");
  std::ostringstream os;
  os.precision(3);
  os << rows << " rows in " << t * 1000 << " ms";
  return {f.empty(), f.empty() ? os.str() : f.str()};
}

Outcome figureGoldens() {
  Failures f;
  for (const char *name : {"pbkdf2", "double_pointer", "conditional"}) {
    try {
      auto out = adjunct::transform(cast::parse(test::readFixture(std::string("figures/") + name + ".c"))).tu;
      auto want = cast::parse(test::readFixture(std::string("figures/") + name + ".expected"));
      if (!cast::structuralEqual(out, want))
        f.add(std::string(name) + " differs from golden");
    } catch (const std::exception &e) {
      f.add(std::string(name) + ": " + e.what());
    }
  }
  try {
    auto tu = cast::parse(test::readFixture("lil/figure.c"));
    auto ms = patterns::findLil(tu);
    if (ms.size() != 1)
      f.add("LIL figure: " + std::to_string(ms.size()) + " matches");
    else if (!cast::structuralEqual(patterns::rewriteLil(tu, ms[0]), cast::parse(test::readFixture("lil/figure.expected"))))
      f.add("LIL figure differs from golden");
  } catch (const std::exception &e) {
    f.add(std::string("LIL figure: ") + e.what());
  }
  return {f.empty(), f.empty() ? "PBKDF2, double pointer, conditional move, LIL" : f.str()};
}

// Criteria 3 and 4 share one pass over the corpus.
struct CorpusResult {
  Outcome equivalence, idempotence;
};

CorpusResult generatedCorpus(int programs) {
  auto start = std::chrono::steady_clock::now();
  Failures eq, idem;
  long events = 0;
  for (int k = 1; k <= programs; ++k) {
    auto seed = static_cast<std::uint64_t>(k);
    int size = 5 + static_cast<int>(seed * 7919 % 76);
    try {
      auto tu = interp::generateProgram(seed, size);
      auto in = interp::generatedInputs(seed);
      auto once = adjunct::transform(tu).tu;
      auto twice = adjunct::transform(once).tu;
      auto a = interp::run(tu, interp::kGeneratedEntry, in);
      auto b = interp::run(once, interp::kGeneratedEntry, in);
      auto c = interp::run(twice, interp::kGeneratedEntry, in);
      events += static_cast<long>(a.trace.events.size());
      if (!a.ok())
        eq.add("seed " + std::to_string(seed) + " traps: " + a.trap->str());
      if (auto d = interp::firstDivergence(a, b, CompareMode::Strict))
        eq.add("seed " + std::to_string(seed) + ": " + d->description);
      if (auto d = interp::firstDivergence(b, c, CompareMode::Strict))
        idem.add("seed " + std::to_string(seed) + ": " + d->description);
    } catch (const std::exception &e) {
      eq.add("seed " + std::to_string(seed) + ": " + e.what());
      idem.add("seed " + std::to_string(seed) + ": " + e.what());
    }
  }
  std::ostringstream os;
  os << programs << " programs, " << events << " events, " << static_cast<int>(seconds(start)) << " s";
  return {{eq.empty(), eq.empty() ? os.str() : eq.str()}, {idem.empty(), idem.empty() ? os.str() : idem.str()}};
}

Outcome dependenceVerdicts() {
  Failures f;
  auto expect = [&](const std::string &what, const depend::DependenceReport &r, std::uint32_t line, depend::Verdict v) {
    const auto *l = r.atLine(line);
    if (!l)
      f.add(what + ": no loop at line " + std::to_string(line));
    else if (l->verdict != v)
      f.add(what + ": " + depend::verdictName(l->verdict) + ", expected " + depend::verdictName(v));
  };
  auto pb = cast::parse(test::readFixture("pbkdf2.c"));
  expect("PBKDF2 outer before", depend::analyze(pb), 2, depend::Verdict::Unknown);
  expect("PBKDF2 outer after", depend::analyze(adjunct::transform(pb).tu), 2, depend::Verdict::Parallel);
  auto mc = depend::analyze(cast::parse(test::readFixture("depend/memcpy.c")));
  expect("memcpy left", mc, 4, depend::Verdict::Serial);
  expect("memcpy right", mc, 15, depend::Verdict::Parallel);
  expect("HMAC", depend::analyze(cast::parse(test::readFixture("depend/hmac.c"))), 6, depend::Verdict::Parallel);
  expect("same cell", depend::analyze(cast::parse(test::readFixture("depend/samecell.c"))), 4, depend::Verdict::Serial);
  return {f.empty(), f.empty() ? "PBKDF2 unknown->parallel, memcpy serial/parallel, HMAC parallel, same cell serial"
                               : f.str()};
}

Outcome parallelSoundness() {
  struct Case {
    std::string name;
    cast::TranslationUnit tu;
    std::vector<std::vector<Scalar>> inputs;
  };
  std::vector<Case> cases;
  auto pb = cast::parse(test::readFixture("pbkdf2.c"));
  auto pbIn = ints({{1, 1}, {3, 4}, {5, 9}});
  cases.push_back({"pbkdf2", pb, pbIn});
  cases.push_back({"pbkdf2 transformed", adjunct::transform(pb).tu, pbIn});
  for (const char *n : {"depend/memcpy.c", "depend/hmac.c", "depend/samecell.c"}) {
    auto tu = cast::parse(test::readFixture(n));
    cases.push_back({n, tu, ints({{1}, {4}, {9}})});
    cases.push_back({std::string(n) + " transformed", adjunct::transform(tu).tu, ints({{1}, {4}, {9}})});
  }
  auto mv = cast::parse(test::readFixture("lil/matvec.c"));
  auto mvIn = ints({{1}, {4}, {27}});
  cases.push_back({"matvec", mv, mvIn});
  auto mvLil = patterns::rewriteAllLil(mv);
  cases.push_back({"matvec rewritten", mvLil, mvIn});
  cases.push_back({"matvec rewritten+transformed", adjunct::transform(mvLil).tu, mvIn});
  auto dec = cast::parse(test::readFixture("decidable.c"));
  cases.push_back({"decidable", dec, ints({{0}, {3}, {7}})});
  auto hand = cast::parse(test::readFixture("handoff.c"));
  cases.push_back({"handoff", hand, ints({{3}, {5}, {9}})});

  Failures f;
  int loops = 0, runs = 0;
  for (const auto &c : cases) {
    for (const auto &l : depend::analyze(c.tu).loops) {
      if (l.verdict != depend::Verdict::Parallel)
        continue;
      ++loops;
      auto r = test::checkPermutations(c.tu, l, "entry", c.inputs, 17);
      runs += r.checkedRuns;
      if (r.checkedRuns == 0)
        f.add(c.name + ": loop at line " + std::to_string(l.span.line) + " was never reordered");
      if (!r.ok)
        f.add(c.name + ": " + r.failure);
    }
  }
  if (loops == 0)
    f.add("no parallel loops found");
  std::ostringstream os;
  os << loops << " parallel loops, " << runs << " reordered runs, 3 input sizes each";
  return {f.empty(), f.empty() ? os.str() : f.str()};
}

Outcome lilEquivalence() {
  Failures f;
  auto tu = cast::parse(test::readFixture("lil/matvec.c"));
  auto ms = patterns::findLil(tu);
  if (ms.size() != 1)
    return {false, std::to_string(ms.size()) + " LIL matches"};
  auto out = patterns::rewriteLil(tu, ms[0]);
  auto rowOf = [](const interp::RunResult &r) -> std::optional<std::vector<interp::Value>> {
    if (!r.ok() || !r.state.returnValue)
      return std::nullopt;
    for (const auto &c : r.state.containers)
      if (c.id == r.state.returnValue->ptr.container)
        return c.cells;
    return std::nullopt;
  };
  for (long n : {1, 4, 27}) {
    auto a = interp::run(tu, "entry", {Scalar::ofInt(n)});
    auto b = interp::run(out, "entry", {Scalar::ofInt(n)});
    auto ya = rowOf(a), yb = rowOf(b);
    if (!ya || !yb)
      f.add("nrow " + std::to_string(n) + ": run failed");
    else if (ya->size() != static_cast<std::size_t>(n) || *ya != *yb)
      f.add("nrow " + std::to_string(n) + ": y differs");
    else if (!interp::traceEqual(a, b, CompareMode::ValueLevel))
      f.add("nrow " + std::to_string(n) + ": value-level traces differ");
  }
  return {f.empty(), f.empty() ? "y identical for nrow 1, 4, 27" : f.str()};
}

Outcome scannerCorpus() {
  Failures f;
  auto manifest = nlohmann::json::parse(test::readFixture("scan/manifest.json"));
  std::vector<std::string> paths;
  for (const auto &e : fs::directory_iterator(test::fixturePath("scan")))
    if (e.path().extension() == ".c")
      paths.push_back(e.path().string());
  std::sort(paths.begin(), paths.end());
  auto countsOf = [](const nlohmann::json &j) {
    scan::Counts c;
    c.loc = j.at("loc");
    c.applicable = j.at("applicable");
    c.nonApplicable = j.at("non_applicable");
    for (const auto &[k, v] : j.at("exemptions").items())
      c.exemptions[k] = v;
    return c;
  };
  auto ref = scan::scan(paths);
  if (ref.files.size() != manifest.at("files").size())
    f.add("file count differs");
  for (const auto &file : ref.files) {
    auto name = fs::path(file.path).filename().string();
    if (!manifest.at("files").contains(name)) {
      f.add(name + " not in manifest");
      continue;
    }
    const auto &m = manifest.at("files").at(name);
    if (!(file.counts == countsOf(m)) || m.at("status").get<std::string>() != scan::fileStatusName(file.status))
      f.add(name + " counts differ");
  }
  if (!(ref.total == countsOf(manifest.at("total"))))
    f.add("totals differ");
  std::mt19937 rng(2026);
  for (int k = 0; k < 20; ++k) {
    auto shuffled = paths;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto got = scan::scan(shuffled);
    bool same = got.total == ref.total && got.files.size() == ref.files.size();
    for (std::size_t i = 0; same && i < got.files.size(); ++i)
      same = got.files[i].path == ref.files[i].path && got.files[i].counts == ref.files[i].counts;
    if (!same) {
      f.add("order " + std::to_string(k) + " changes the report");
      break;
    }
  }
  return {f.empty(), f.empty() ? std::to_string(paths.size()) + " files match manifest; 20 orders agree" : f.str()};
}

// Printed statements of `fn` that mention `var`, in order.
std::vector<std::string> mentions(const cast::Function &fn, const std::string &var) {
  std::vector<std::string> out;
  std::function<void(const std::vector<cast::Stmt> &)> walk = [&](const std::vector<cast::Stmt> &body) {
    for (const auto &s : body) {
      bool hit = s.kind == cast::StmtKind::Decl && s.name == var;
      std::function<void(const cast::Expr &)> look = [&](const cast::Expr &e) {
        if (e.kind == cast::ExprKind::Ident && e.name == var)
          hit = true;
        for (const auto &k : e.kids)
          look(k);
      };
      for (const auto &e : s.exprs)
        look(e);
      if (hit) {
        std::string text = cast::print(s);
        // Compound statements: only the header line.
        out.push_back(text.substr(0, text.find('\n')));
      }
      walk(s.forInit);
      walk(s.forStep);
      walk(s.body);
      walk(s.elseBody);
    }
  };
  walk(fn.body);
  return out;
}

Outcome backOffSafety() {
  Failures f;
  auto tu = cast::parse(test::readFixture("undecidable.c"), "undecidable.c");
  auto res = adjunct::transform(tu);
  auto before = cast::parse(cast::print(tu));
  auto after = cast::parse(cast::print(res.tu));
  auto pre = mentions(*before.function("fill"), "p");
  auto post = mentions(*after.function("fill"), "p");
  if (pre.empty())
    f.add("fixture has no uses of p");
  if (pre != post)
    f.add("declaration or uses of p changed");
  if (res.plan.find("fill", "p"))
    f.add("p received an adjunct");
  bool named = false;
  for (const auto &b : res.diagnostics.backedOff)
    if (b.function == "fill" && b.pointer == "p" &&
        std::string(adjunct::verdictName(b.verdict)) == "conditional-reassignment")
      named = true;
  if (!named)
    f.add("no conditional-reassignment diagnostic for p");
  return {f.empty(), f.empty() ? std::to_string(pre.size()) + " statements byte-identical; conditional-reassignment"
                               : f.str()};
}

} // namespace

int main(int argc, char **argv) {
  int programs = 10000;
  if (argc > 1)
    programs = std::max(1, std::atoi(argv[1]));
  std::vector<std::pair<std::string, std::function<Outcome()>>> steps;
  CorpusResult corpus;
  bool corpusDone = false;
  auto corpusOnce = [&]() -> CorpusResult & {
    if (!corpusDone) {
      corpus = generatedCorpus(programs);
      corpusDone = true;
    }
    return corpus;
  };
  steps.emplace_back("transformation-table goldens", tableGoldens);
  steps.emplace_back("figure goldens", figureGoldens);
  steps.emplace_back("randomized strict trace equivalence", [&] { return corpusOnce().equivalence; });
  steps.emplace_back("idempotence", [&] { return corpusOnce().idempotence; });
  steps.emplace_back("dependence verdicts", dependenceVerdicts);
  steps.emplace_back("parallel-verdict soundness", parallelSoundness);
  steps.emplace_back("LIL value-level equivalence", lilEquivalence);
  steps.emplace_back("scanner mini-corpus", scannerCorpus);
  steps.emplace_back("back-off safety", backOffSafety);
  int failed = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    Outcome o;
    try {
      o = steps[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << steps[i].first << "): " << o.detail
              << std::endl;
    if (!o.ok)
      ++failed;
  }
  std::cout << (steps.size() - failed) << "/" << steps.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
