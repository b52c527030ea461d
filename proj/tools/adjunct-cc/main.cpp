// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// adjunct-cc: transform, analyze, scan and run-diff.

#include "report.hpp"

#include "adj/adjunct/adjunct.hpp"
#include "adj/cast/cast.hpp"
#include "adj/depend/depend.hpp"
#include "adj/effects/effects.hpp"
#include "adj/interp/generator.hpp"
#include "adj/interp/interp.hpp"
#include "adj/patterns/lil.hpp"
#include "adj/scan/scan.hpp"

#include "CLI11.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace {

using adjcc::ordered_json;
namespace fs = std::filesystem;

enum Exit : int { kOk = 0, kInputError = 1, kInternalError = 2, kDivergence = 3, kTrap = 4 };

struct RunConfig {
  std::vector<std::string> inputs;
  std::string effectsPath;
  bool enableLil = false;
  std::string reportPath;
  std::string outPath;
  bool preTransform = false;
  std::string entry = "entry";
  std::string args;
  std::string mode = "strict";
  std::int64_t fuel = 1'000'000;
  std::optional<std::uint64_t> seed;
  int size = 40;
};

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

bool useColor() {
  if (const char *v = std::getenv("ADJUNCT_CC_COLOR")) {
    std::string s = v;
    if (s == "0" || s == "never" || s == "off" || s == "false" || s.empty())
      return false;
    if (s == "1" || s == "always" || s == "on" || s == "true")
      return true;
  }
  return isatty(STDERR_FILENO) != 0;
}

std::string paint(const std::string &text, const char *code) {
  static const bool color = useColor();
  return color ? std::string("\033[") + code + "m" + text + "\033[0m" : text;
}

void note(const std::string &path, const std::string &msg) { std::cerr << paint(path, "1") << ": " << msg << "\n"; }
void warn(const std::string &path, const std::string &msg) {
  std::cerr << paint(path, "1") << ": " << paint("error", "31") << ": " << msg << "\n";
}

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec) || !in)
    throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw InputError("cannot write " + path);
}

void emitReport(const RunConfig &cfg, const ordered_json &j) {
  std::string text = j.dump(2) + "\n";
  if (cfg.reportPath.empty())
    std::cout << text;
  else
    writeFile(cfg.reportPath, text);
}

adj::effects::EffectDatabase effectsOf(const RunConfig &cfg) {
  if (cfg.effectsPath.empty() || cfg.effectsPath == "builtin")
    return adj::effects::EffectDatabase::builtins();
  try {
    return adj::effects::EffectDatabase::load(cfg.effectsPath);
  } catch (const adj::effects::EffectError &e) {
    throw InputError(e.what());
  }
}

std::string outputPathFor(const std::string &input) {
  fs::path p(input);
  if (p.extension() == ".c")
    return p.replace_extension(".adjunct.c").string();
  return input + ".adjunct.c";
}

adj::cast::TranslationUnit parseFile(const std::string &path) {
  std::string text = readFile(path);
  try {
    return adj::cast::parse(text, path);
  } catch (const adj::cast::FrontendError &e) {
    throw InputError(e.what());
  }
}

struct FileOutcome {
  int exit = kOk;
  ordered_json json;
};

// Runs `work` on every input concurrently; results come back sorted by path.
template <class F> std::vector<FileOutcome> perFile(const RunConfig &cfg, F work) {
  std::vector<std::string> paths = cfg.inputs;
  std::sort(paths.begin(), paths.end());
  std::vector<std::future<FileOutcome>> jobs;
  for (const auto &p : paths)
    jobs.push_back(std::async(std::launch::async, [&work, p] {
      FileOutcome o;
      try {
        o.json = work(p);
        o.json["status"] = "ok";
      } catch (const InputError &e) {
        o.exit = kInputError;
        o.json = {{"input", p}, {"status", "input-error"}, {"error", e.what()}};
      } catch (const std::exception &e) {
        o.exit = kInternalError;
        o.json = {{"input", p}, {"status", "internal-error"}, {"error", e.what()}};
      }
      return o;
    }));
  std::vector<FileOutcome> out;
  for (auto &j : jobs)
    out.push_back(j.get());
  return out;
}

int worst(const std::vector<FileOutcome> &os) {
  int code = kOk;
  for (const auto &o : os)
    code = std::max(code, o.exit);
  return code;
}

int cmdTransform(const RunConfig &cfg) {
  if (!cfg.outPath.empty() && cfg.inputs.size() != 1)
    throw InputError("--out needs exactly one input");
  auto db = effectsOf(cfg);
  auto outcomes = perFile(cfg, [&](const std::string &path) {
    auto tu = parseFile(path);
    ordered_json j = {{"input", path}};
    auto matches = cfg.enableLil ? adj::patterns::findLil(tu) : std::vector<adj::patterns::LilMatch>{};
    if (cfg.enableLil)
      tu = adj::patterns::rewriteAllLil(tu);
    auto result = adj::adjunct::transform(tu, db);
    std::string out = cfg.outPath.empty() ? outputPathFor(path) : cfg.outPath;
    writeFile(out, adj::cast::print(result.tu));
    j["output"] = out;
    j.update(adjcc::transformJson(result));
    j["lil_matches"] = adjcc::lilJson(matches);
    std::ostringstream msg;
    msg << result.plan.mapping.size() << " adjuncts, " << result.diagnostics.backedOff.size() << " backed off -> "
        << out;
    note(path, msg.str());
    for (const auto &b : result.diagnostics.backedOff)
      note(b.span.str(), paint("back-off", "33") + " " + b.function + "." + b.pointer + ": " +
                             adj::adjunct::verdictName(b.verdict));
    return j;
  });
  ordered_json files = ordered_json::array();
  for (auto &o : outcomes) {
    if (o.exit != kOk)
      warn(o.json["input"], o.json["error"]);
    files.push_back(o.json);
  }
  emitReport(cfg, {{"command", "transform"}, {"files", files}});
  return worst(outcomes);
}

int cmdAnalyze(const RunConfig &cfg) {
  auto db = effectsOf(cfg);
  auto outcomes = perFile(cfg, [&](const std::string &path) {
    auto tu = parseFile(path);
    if (cfg.enableLil)
      tu = adj::patterns::rewriteAllLil(tu);
    if (cfg.preTransform)
      tu = adj::adjunct::transform(tu, db).tu;
    auto rep = adj::depend::analyze(tu, db);
    for (const auto &l : rep.loops)
      note(l.span.str(), std::string(l.function) + ": " + adj::depend::verdictName(l.verdict));
    return ordered_json{{"input", path}, {"transformed", cfg.preTransform}, {"loops", adjcc::loopsJson(rep)}};
  });
  ordered_json files = ordered_json::array();
  for (auto &o : outcomes) {
    if (o.exit != kOk)
      warn(o.json["input"], o.json["error"]);
    files.push_back(o.json);
  }
  emitReport(cfg, {{"command", "analyze"}, {"files", files}});
  return worst(outcomes);
}

int cmdScan(const RunConfig &cfg) {
  auto rep = adj::scan::scan(cfg.inputs);
  for (const auto &f : rep.files)
    if (f.status != adj::scan::FileStatus::Ok)
      warn(f.path, f.message);
  const auto &t = rep.total;
  std::ostringstream msg;
  msg << t.loc << " LoC, " << t.applicable << " applicable, " << t.nonApplicable << " non-applicable, "
      << t.exemptions.at(adj::scan::kAllocationDelegation) << " allocation-delegation, "
      << t.exemptions.at(adj::scan::kArgv) << " argv";
  note("total", msg.str());
  emitReport(cfg, adjcc::scanJson(rep));
  return kOk;
}

std::vector<adj::interp::Scalar> parseArgs(const std::string &text) {
  std::vector<adj::interp::Scalar> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty())
      continue;
    try {
      std::size_t used = 0;
      if (item.find_first_of(".eE") != std::string::npos) {
        double d = std::stod(item, &used);
        out.push_back(adj::interp::Scalar::ofFloat(d));
      } else {
        long long v = std::stoll(item, &used);
        out.push_back(adj::interp::Scalar::ofInt(v));
      }
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw InputError("bad argument '" + item + "'");
    }
  }
  return out;
}

int cmdRunDiff(const RunConfig &cfg) {
  auto db = effectsOf(cfg);
  adj::cast::TranslationUnit left, right;
  std::string leftName, rightName;
  std::string entry = cfg.entry;
  std::vector<adj::interp::Scalar> inputs;
  if (cfg.seed) {
    if (!cfg.inputs.empty())
      throw InputError("--seed generates its own program; no inputs expected");
    if (cfg.size < adj::interp::kMinProgramSize || cfg.size > adj::interp::kMaxProgramSize)
      throw InputError("--size must be in [" + std::to_string(adj::interp::kMinProgramSize) + ", " +
                       std::to_string(adj::interp::kMaxProgramSize) + "]");
    left = adj::interp::generateProgram(*cfg.seed, cfg.size);
    leftName = "generated:" + std::to_string(*cfg.seed);
    entry = adj::interp::kGeneratedEntry;
    inputs = adj::interp::generatedInputs(*cfg.seed);
  } else {
    if (cfg.inputs.empty() || cfg.inputs.size() > 2)
      throw InputError("run-diff takes one or two inputs");
    left = parseFile(cfg.inputs[0]);
    leftName = cfg.inputs[0];
    inputs = parseArgs(cfg.args);
  }
  if (cfg.inputs.size() == 2) {
    right = parseFile(cfg.inputs[1]);
    rightName = cfg.inputs[1];
  } else {
    right = adj::adjunct::transform(left, db).tu;
    rightName = leftName + " (transformed)";
  }
  auto mode = cfg.mode == "value" ? adj::interp::CompareMode::ValueLevel : adj::interp::CompareMode::Strict;
  adj::interp::RunOptions opt;
  opt.fuel = cfg.fuel;
  adj::interp::RunResult a, b;
  try {
    a = adj::interp::run(left, entry, inputs, opt);
    b = adj::interp::run(right, entry, inputs, opt);
  } catch (const std::invalid_argument &e) {
    throw InputError(e.what());
  }
  auto div = adj::interp::firstDivergence(a, b, mode);
  ordered_json j = {{"command", "run-diff"},
                    {"left", leftName},
                    {"right", rightName},
                    {"entry", entry},
                    {"mode", cfg.mode},
                    {"equal", !div.has_value()},
                    {"events", {{"left", a.trace.events.size()}, {"right", b.trace.events.size()}}},
                    {"traps", {{"left", adjcc::trapJson(a.trap)}, {"right", adjcc::trapJson(b.trap)}}}};
  ordered_json args = ordered_json::array();
  for (const auto &s : inputs)
    args.push_back(s.str());
  j["inputs"] = args;
  j["divergence"] = nullptr;
  if (div) {
    ordered_json d = {{"index", div->index}, {"description", div->description}};
    if (div->index < a.trace.events.size())
      d["left_event"] = a.trace.events[div->index].str();
    if (div->index < b.trace.events.size())
      d["right_event"] = b.trace.events[div->index].str();
    j["divergence"] = d;
  }
  emitReport(cfg, j);
  for (const auto *r : {&a, &b})
    if (r->trap)
      warn(r->trap->span.str(), paint("trap", "31") + std::string(" ") + r->trap->str());
  if (div) {
    std::ostringstream msg;
    msg << "first divergence at event " << div->index << ": " << div->description;
    warn(leftName, msg.str());
    if (div->index < a.trace.events.size())
      std::cerr << "  left:  " << a.trace.events[div->index].str() << "\n";
    if (div->index < b.trace.events.size())
      std::cerr << "  right: " << b.trace.events[div->index].str() << "\n";
  } else {
    note(leftName, paint("traces equal", "32"));
  }
  if (a.trap || b.trap)
    return kTrap;
  return div ? kDivergence : kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Adjunct transformation, dependence analysis and applicability scanning for a C subset"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--effects", cfg.effectsPath, "Effect annotation file layered over the built-ins ('builtin' for none)");
  app.add_option("--report", cfg.reportPath, "Write the JSON report here instead of stdout");

  auto *transform = app.add_subcommand("transform", "Rewrite pointer movements into adjunct offsets");
  transform->add_option("inputs", cfg.inputs, "C files")->required();
  transform->add_option("-o,--out", cfg.outPath, "Output path (single input only)");
  transform->add_flag("--enable-lil", cfg.enableLil, "Restructure list-of-lists initialization first");

  auto *analyze = app.add_subcommand("analyze", "Report per-loop dependence verdicts");
  analyze->add_option("inputs", cfg.inputs, "C files")->required();
  analyze->add_flag("--pre-transform", cfg.preTransform, "Apply the adjunct transformation before analysis");
  analyze->add_flag("--enable-lil", cfg.enableLil, "Restructure list-of-lists initialization first");

  auto *scan = app.add_subcommand("scan", "Count applicable and non-applicable pointers");
  scan->add_option("inputs", cfg.inputs, "C files")->required();
  scan->add_option("--json", cfg.reportPath, "Write the JSON report here");

  auto *diff = app.add_subcommand("run-diff", "Interpret two programs and compare their traces");
  diff->add_option("inputs", cfg.inputs, "Original and rewritten file; the rewritten side defaults to the transform");
  diff->add_option("--entry", cfg.entry, "Entry function")->capture_default_str();
  diff->add_option("--args", cfg.args, "Comma separated scalar arguments");
  diff->add_option("--mode", cfg.mode, "strict or value")->check(CLI::IsMember({"strict", "value"}))->capture_default_str();
  diff->add_option("--fuel", cfg.fuel, "Step budget per run")->capture_default_str();
  diff->add_option("--seed", cfg.seed, "Diff a generated program against its transform");
  diff->add_option("--size", cfg.size, "Generated program size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (transform->parsed())
      return cmdTransform(cfg);
    if (analyze->parsed())
      return cmdAnalyze(cfg);
    if (scan->parsed())
      return cmdScan(cfg);
    return cmdRunDiff(cfg);
  } catch (const InputError &e) {
    warn("adjunct-cc", e.what());
    return kInputError;
  } catch (const std::exception &e) {
    warn("adjunct-cc", std::string("internal error: ") + e.what());
    return kInternalError;
  }
}
