#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "causalkit/error.hpp"

namespace causalkit {

using Term = std::vector<std::string>;  // product of the named columns
using CoefficientMap = std::vector<std::pair<std::string, double>>;

inline std::string term_name(const Term& term) {
  if (term.empty()) return "Intercept";
  std::string s = term.front();
  for (std::size_t i = 1; i < term.size(); ++i) s += "*" + term[i];
  return s;
}

/// Non-empty subsets of `treatments` ordered by size, then by position:
/// X1, X2, X3, X1*X2, X1*X3, X2*X3, X1*X2*X3.
inline std::vector<Term> saturated_terms(const std::vector<std::string>& treatments) {
  const std::size_t t = treatments.size();
  if (t > 20) throw Error(Errc::RegimeExplosion, "too many treatments for a saturated model");
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 1; m < (1u << t); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    if (pa != pb) return pa < pb;
    // lexicographic on the positions of set bits
    for (std::uint32_t bit = 0; bit < 32; ++bit) {
      const bool ia = a & (1u << bit), ib = b & (1u << bit);
      if (ia != ib) return ia;
    }
    return false;
  });
  std::vector<Term> out;
  for (auto m : masks) {
    Term term;
    for (std::size_t j = 0; j < t; ++j) {
      if (m & (1u << j)) term.push_back(treatments[j]);
    }
    out.push_back(std::move(term));
  }
  return out;
}

/// Coefficients of the saturated model sum_S beta_S prod_{j in S} x_j from
/// the 2^T regime means; regime index bit j is treatment j. Inclusion-exclusion:
/// beta_S = sum_{R subset S} (-1)^{|S|-|R|} mean(R).
inline CoefficientMap saturated_coefficients(const std::vector<std::string>& treatments,
                                             const std::vector<double>& regime_means) {
  const std::size_t t = treatments.size();
  if (regime_means.size() != (std::size_t{1} << t)) {
    throw Error(Errc::LengthMismatch, "need one mean per regime");
  }
  auto beta = [&](std::uint32_t s) {
    double acc = 0;
    for (std::uint32_t r = s;; r = (r - 1) & s) {
      const int sign = (__builtin_popcount(s) - __builtin_popcount(r)) % 2 ? -1 : 1;
      acc += sign * regime_means[r];
      if (r == 0) break;
    }
    return acc;
  };
  CoefficientMap out{{"Intercept", regime_means[0]}};
  for (const auto& term : saturated_terms(treatments)) {
    std::uint32_t s = 0;
    for (const auto& name : term) {
      s |= 1u << static_cast<std::uint32_t>(std::find(treatments.begin(), treatments.end(), name) - treatments.begin());
    }
    out.emplace_back(term_name(term), beta(s));
  }
  return out;
}

inline double lookup(const CoefficientMap& m, const std::string& name) {
  for (const auto& [k, v] : m) {
    if (k == name) return v;
  }
  throw Error(Errc::InvalidArgument, "no coefficient '" + name + "'");
}

}  // namespace causalkit
