// Copyright 2026 The adjunct-cc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Integer polynomials over named symbols, used for symbolic index ranges.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace adj::depend::detail {

class Poly {
public:
  using Monomial = std::vector<std::string>; // sorted symbol names, repeats for powers

  Poly() = default;
  static Poly constant(long v);
  static Poly symbol(const std::string &name);

  Poly operator+(const Poly &o) const;
  Poly operator-(const Poly &o) const;
  Poly operator*(const Poly &o) const;
  Poly operator-() const;
  bool operator==(const Poly &o) const { return terms_ == o.terms_; }
  bool operator!=(const Poly &o) const { return !(*this == o); }

  bool isConstant() const;
  long constantValue() const; ///< 0 for the zero polynomial
  bool mentions(const std::string &sym) const;
  int degreeIn(const std::string &sym) const;

  /// p = coef * sym + rest with neither part mentioning sym; nullopt when
  /// sym occurs with degree > 1.
  std::optional<std::pair<Poly, Poly>> splitLinear(const std::string &sym) const;

  /// Replaces sym by value.
  Poly substitute(const std::string &sym, const Poly &value) const;

  std::string str() const;

private:
  void add(const Monomial &m, long c);
  std::map<Monomial, long> terms_;
};

} // namespace adj::depend::detail
