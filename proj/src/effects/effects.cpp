// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "adj/effects/effects.hpp"

#include "adj/cast/cast.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace adj::effects {

using json = nlohmann::json;

const char *effectName(Effect e) {
  switch (e) {
  case Effect::Read: return "read";
  case Effect::Write: return "write";
  case Effect::ReadWrite: return "readwrite";
  }
  return "readwrite";
}

std::ostream &operator<<(std::ostream &os, Effect e) { return os << effectName(e); }

const char *specialName(Special s) { return s == Special::AllocationDelegation ? "allocation-delegation" : "none"; }

std::optional<Effect> effectFromString(std::string_view s) {
  if (s == "read")
    return Effect::Read;
  if (s == "write")
    return Effect::Write;
  if (s == "readwrite")
    return Effect::ReadWrite;
  return std::nullopt;
}

const ParamEffect *EffectAnnotation::param(int index) const {
  for (const auto &p : params)
    if (p.index == index)
      return &p;
  return nullptr;
}

namespace {

EffectAnnotation entry(std::string fn, std::vector<ParamEffect> params, Special special = Special::None) {
  return EffectAnnotation{std::move(fn), std::move(params), special};
}

std::string lineCol(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void fail(const std::string &where, const std::string &msg) {
  throw EffectError(where + ": " + msg);
}

EffectAnnotation parseEntry(const json &obj, const std::string &where) {
  if (!obj.is_object())
    fail(where, "expected an object");
  for (const auto &[key, _] : obj.items())
    if (key != "function" && key != "params" && key != "special")
      fail(where, "unknown key '" + key + "'");
  if (!obj.contains("function") || !obj["function"].is_string() || obj["function"].get<std::string>().empty())
    fail(where, "'function' must be a non-empty string");
  EffectAnnotation a;
  a.function = obj["function"].get<std::string>();
  std::string at = where + " (" + a.function + ")";
  if (obj.contains("params")) {
    const json &ps = obj["params"];
    if (!ps.is_array())
      fail(at, "'params' must be an array");
    std::set<int> seen;
    for (const auto &p : ps) {
      if (!p.is_object() || !p.contains("index") || !p["index"].is_number_integer() || !p.contains("effect") ||
          !p["effect"].is_string())
        fail(at, "each param needs an integer 'index' and a string 'effect'");
      for (const auto &[key, _] : p.items())
        if (key != "index" && key != "effect" && key != "extent")
          fail(at, "unknown param key '" + key + "'");
      if (p.contains("extent") && p["extent"] != "whole-container")
        fail(at, "only the whole-container extent is supported");
      int idx = p["index"].get<int>();
      if (idx < 0)
        fail(at, "negative parameter index");
      if (!seen.insert(idx).second)
        fail(at, "duplicate parameter index " + std::to_string(idx));
      auto eff = effectFromString(p["effect"].get<std::string>());
      if (!eff)
        fail(at, "effect must be read, write or readwrite");
      a.params.push_back({idx, *eff});
    }
  }
  std::sort(a.params.begin(), a.params.end(), [](auto &l, auto &r) { return l.index < r.index; });
  if (obj.contains("special")) {
    const json &s = obj["special"];
    if (s == "allocation-delegation")
      a.special = Special::AllocationDelegation;
    else if (s != "none")
      fail(at, "special must be allocation-delegation or none");
  }
  if (const auto *sig = cast::findBuiltin(a.function)) {
    for (const auto &p : a.params)
      if (p.index >= static_cast<int>(sig->params.size()))
        fail(at, "parameter index " + std::to_string(p.index) + " exceeds arity " +
                     std::to_string(sig->params.size()));
  }
  return a;
}

} // namespace

EffectDatabase EffectDatabase::builtins() {
  EffectDatabase db;
  db.add(entry("memcpy", {{0, Effect::Write}, {1, Effect::Read}}));
  db.add(entry("memset", {{0, Effect::Write}}));
  db.add(entry("free", {{0, Effect::Write}}));
  db.add(entry("atoi", {{0, Effect::Read}}));
  db.add(entry("HMAC_CTX_new", {}));
  db.add(entry("HMAC_CTX_copy", {{0, Effect::Write}, {1, Effect::Read}}));
  db.add(entry("HMAC_CTX_free", {{0, Effect::Write}}));
  db.add(entry("HMAC_Update", {{0, Effect::ReadWrite}}));
  db.add(entry("HMAC_Final", {{0, Effect::ReadWrite}}));
  db.add(entry(kAllocIntrinsic, {}));
  return db;
}

EffectDatabase EffectDatabase::fromJson(std::string_view text, const std::string &sourceName, bool withBuiltins) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    std::string msg = e.what();
    auto pos = msg.find("]: ");
    fail(sourceName + ":" + lineCol(text, e.byte == 0 ? 0 : e.byte - 1),
         pos == std::string::npos ? msg : msg.substr(pos + 3));
  }
  if (!doc.is_array())
    fail(sourceName, "expected a top-level array of function entries");
  EffectDatabase fileDb;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    std::string where = sourceName + ": entry " + std::to_string(i);
    EffectAnnotation a = parseEntry(doc[i], where);
    if (fileDb.contains(a.function))
      fail(where, "duplicate entry for function '" + a.function + "'");
    fileDb.add(std::move(a));
  }
  EffectDatabase db = withBuiltins ? builtins() : EffectDatabase();
  for (auto &[name, a] : fileDb.entries_)
    db.put(a);
  return db;
}

EffectDatabase EffectDatabase::load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw EffectError(path + ": cannot open effect file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return fromJson(ss.str(), path);
}

void EffectDatabase::add(EffectAnnotation annotation) {
  std::string name = annotation.function;
  if (!entries_.emplace(name, std::move(annotation)).second)
    throw EffectError("duplicate entry for function '" + name + "'");
}

void EffectDatabase::put(EffectAnnotation annotation) {
  std::string name = annotation.function;
  entries_[name] = std::move(annotation);
}

bool EffectDatabase::remove(const std::string &function) { return entries_.erase(function) > 0; }

const EffectAnnotation *EffectDatabase::find(std::string_view function) const {
  auto it = entries_.find(function);
  return it == entries_.end() ? nullptr : &it->second;
}

Effect EffectDatabase::effectOf(std::string_view callee, int argIndex) const {
  if (const auto *a = find(callee))
    if (const auto *p = a->param(argIndex))
      return p->effect;
  return Effect::ReadWrite;
}

bool EffectDatabase::isAllocationDelegation(std::string_view callee) const {
  const auto *a = find(callee);
  return a && a->special == Special::AllocationDelegation;
}

std::vector<EffectAnnotation> EffectDatabase::entries() const {
  std::vector<EffectAnnotation> out;
  for (const auto &[_, a] : entries_)
    out.push_back(a);
  return out;
}

std::string EffectDatabase::toJson() const {
  json arr = json::array();
  for (const auto &[name, a] : entries_) {
    json obj;
    obj["function"] = name;
    json ps = json::array();
    for (const auto &p : a.params)
      ps.push_back({{"index", p.index}, {"effect", effectName(p.effect)}});
    obj["params"] = ps;
    if (a.special != Special::None)
      obj["special"] = specialName(a.special);
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

} // namespace adj::effects
