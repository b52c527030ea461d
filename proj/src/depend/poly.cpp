// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0

#include "poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace adj::depend::detail {

namespace {

long checkedAdd(long a, long b) {
  long r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("polynomial coefficient overflow");
  return r;
}

long checkedMul(long a, long b) {
  long r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("polynomial coefficient overflow");
  return r;
}

} // namespace

void Poly::add(const Monomial &m, long c) {
  if (c == 0)
    return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second = checkedAdd(it->second, c);
  if (it->second == 0)
    terms_.erase(it);
}

Poly Poly::constant(long v) {
  Poly p;
  p.add({}, v);
  return p;
}

Poly Poly::symbol(const std::string &name) {
  Poly p;
  p.add({name}, 1);
  return p;
}

Poly Poly::operator+(const Poly &o) const {
  Poly r = *this;
  for (const auto &[m, c] : o.terms_)
    r.add(m, c);
  return r;
}

Poly Poly::operator-() const {
  Poly r;
  for (const auto &[m, c] : terms_)
    r.add(m, checkedMul(c, -1));
  return r;
}

Poly Poly::operator-(const Poly &o) const { return *this + (-o); }

Poly Poly::operator*(const Poly &o) const {
  Poly r;
  for (const auto &[m1, c1] : terms_)
    for (const auto &[m2, c2] : o.terms_) {
      Monomial m = m1;
      m.insert(m.end(), m2.begin(), m2.end());
      std::sort(m.begin(), m.end());
      r.add(m, checkedMul(c1, c2));
    }
  return r;
}

bool Poly::isConstant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

long Poly::constantValue() const {
  auto it = terms_.find({});
  return it == terms_.end() ? 0 : it->second;
}

bool Poly::mentions(const std::string &sym) const { return degreeIn(sym) > 0; }

int Poly::degreeIn(const std::string &sym) const {
  int d = 0;
  for (const auto &[m, c] : terms_)
    d = std::max(d, static_cast<int>(std::count(m.begin(), m.end(), sym)));
  return d;
}

std::optional<std::pair<Poly, Poly>> Poly::splitLinear(const std::string &sym) const {
  Poly coef, rest;
  for (const auto &[m, c] : terms_) {
    auto n = std::count(m.begin(), m.end(), sym);
    if (n > 1)
      return std::nullopt;
    if (n == 0) {
      rest.add(m, c);
      continue;
    }
    Monomial reduced = m;
    reduced.erase(std::find(reduced.begin(), reduced.end(), sym));
    coef.add(reduced, c);
  }
  return std::make_pair(coef, rest);
}

Poly Poly::substitute(const std::string &sym, const Poly &value) const {
  Poly r;
  for (const auto &[m, c] : terms_) {
    Poly term = constant(c);
    for (const auto &s : m)
      term = term * (s == sym ? value : symbol(s));
    r = r + term;
  }
  return r;
}

std::string Poly::str() const {
  if (terms_.empty())
    return "0";
  std::string out;
  // Constant last, higher-degree terms first.
  std::vector<std::pair<Monomial, long>> ordered(terms_.begin(), terms_.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto &a, const auto &b) {
    if (a.first.empty() != b.first.empty())
      return b.first.empty();
    return a.first.size() > b.first.size();
  });
  bool first = true;
  for (const auto &[m, c] : ordered) {
    long mag = c < 0 ? -c : c;
    if (first)
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    first = false;
    std::string body;
    for (const auto &s : m)
      body += (body.empty() ? "" : "*") + s;
    if (body.empty())
      out += std::to_string(mag);
    else if (mag == 1)
      out += body;
    else
      out += std::to_string(mag) + "*" + body;
  }
  return out;
}

} // namespace adj::depend::detail
