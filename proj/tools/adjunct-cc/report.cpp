// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "report.hpp"

#include "adj/cast/cast.hpp"

namespace adjcc {

ordered_json spanJson(const adj::cast::SourceSpan &s) {
  return {{"file", s.fileName()}, {"line", s.line}, {"column", s.column}};
}

ordered_json transformJson(const adj::adjunct::TransformResult &r) {
  ordered_json adjuncts = ordered_json::array();
  for (const auto &e : r.plan.mapping)
    adjuncts.push_back({{"function", e.function}, {"pointer", e.pointer}, {"adjunct", e.adjunct}});
  ordered_json backOffs = ordered_json::array();
  for (const auto &b : r.diagnostics.backedOff)
    backOffs.push_back({{"function", b.function},
                        {"pointer", b.pointer},
                        {"verdict", adj::adjunct::verdictName(b.verdict)},
                        {"span", spanJson(b.span)}});
  ordered_json sites = ordered_json::object();
  for (const auto &[k, v] : r.diagnostics.rewrittenSites)
    sites[k] = v;
  return {{"adjunct_type", r.plan.adjunctType.spelling()},
          {"adjuncts", adjuncts},
          {"back_offs", backOffs},
          {"rewritten_sites", sites}};
}

ordered_json lilJson(const std::vector<adj::patterns::LilMatch> &ms) {
  ordered_json out = ordered_json::array();
  for (const auto &m : ms) {
    ordered_json bindings = ordered_json::array();
    for (const auto &b : m.rowBindings)
      bindings.push_back({{"target", adj::cast::print(b.target)}, {"cursor", b.cursor}});
    out.push_back({{"function", m.function},
                   {"scope", spanJson(m.scope)},
                   {"cursors", m.cursors},
                   {"row_bindings", bindings},
                   {"row_length", adj::cast::print(m.rowLength)},
                   {"row_count", adj::cast::print(m.rowCount)}});
  }
  return out;
}

ordered_json loopsJson(const adj::depend::DependenceReport &r) {
  ordered_json out = ordered_json::array();
  for (const auto &l : r.loops) {
    ordered_json ivs = ordered_json::array();
    for (const auto &iv : l.inductionVars)
      ivs.push_back({{"variable", iv.variable},
                     {"start", adj::cast::print(iv.start)},
                     {"stride", adj::cast::print(iv.stride)}});
    out.push_back({{"function", l.function},
                   {"span", spanJson(l.span)},
                   {"verdict", adj::depend::verdictName(l.verdict)},
                   {"reduction", l.reduction},
                   {"induction", ivs},
                   {"evidence", l.evidence}});
  }
  return out;
}

ordered_json countsJson(const adj::scan::Counts &c) {
  ordered_json ex = ordered_json::object();
  for (const auto &[k, v] : c.exemptions)
    ex[k] = v;
  return {{"loc", c.loc}, {"applicable", c.applicable}, {"non_applicable", c.nonApplicable}, {"exemptions", ex}};
}

ordered_json scanJson(const adj::scan::ApplicabilityReport &r) {
  ordered_json files = ordered_json::array();
  for (const auto &f : r.files) {
    ordered_json j = {{"path", f.path}, {"status", adj::scan::fileStatusName(f.status)}};
    if (!f.message.empty())
      j["message"] = f.message;
    j["counts"] = countsJson(f.counts);
    ordered_json findings = ordered_json::array();
    for (const auto &x : f.findings)
      findings.push_back({{"function", x.function},
                          {"variable", x.variable},
                          {"order", x.order},
                          {"category", adj::scan::categoryName(x.category)},
                          {"span", spanJson(x.span)}});
    j["pointers"] = findings;
    files.push_back(std::move(j));
  }
  return {{"command", "scan"}, {"files", files}, {"total", countsJson(r.total)}};
}

ordered_json trapJson(const std::optional<adj::interp::Trap> &t) {
  if (!t)
    return nullptr;
  return {{"kind", adj::interp::trapKindName(t->kind)}, {"message", t->message}, {"span", spanJson(t->span)}};
}

} // namespace adjcc
