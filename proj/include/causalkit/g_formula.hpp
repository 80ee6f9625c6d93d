#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "causalkit/adjustment.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/regression.hpp"
#include "causalkit/saturated.hpp"

namespace causalkit {

// Non-parametric g-formula:
//   E[Y_xbar] = sum_lbar E[Y | Xbar = xbar, Lbar = lbar] prod_t P(L_t = l_t | Xbar_{t-1}, Lbar_{t-1})
// with every conditional replaced by its stratified sample analogue. A stratum
// reached with positive probability but holding no rows is an error, never
// silently dropped.

namespace detail {

struct GFormulaContext {
  const Dataset& data;
  const std::vector<std::string>& treatments;
  const std::vector<std::vector<std::string>>& confounders;
  const std::vector<int>& regime;
  std::span<const double> weights;
  std::vector<const std::vector<double>*> x;
  std::vector<std::vector<const std::vector<double>*>> l;
  const std::vector<double>* y;
};

inline std::string history_label(const GFormulaContext& ctx, std::size_t t, const std::vector<std::uint64_t>& lhist) {
  std::string s;
  for (std::size_t s_ = 0; s_ < t; ++s_) {
    for (std::size_t j = 0; j < ctx.confounders[s_].size(); ++j) {
      s += (s.empty() ? "" : ",") + ctx.confounders[s_][j] + "=" + std::to_string((lhist[s_] >> j) & 1u);
    }
    if (s_ < ctx.treatments.size()) {
      s += (s.empty() ? "" : ",") + ctx.treatments[s_] + "=" + std::to_string(ctx.regime[s_]);
    }
  }
  return s.empty() ? "(all)" : s;
}

inline double g_step(const GFormulaContext& ctx, std::size_t t, const std::vector<std::size_t>& rows,
                     std::vector<std::uint64_t>& lhist) {
  const std::size_t T = ctx.treatments.size();
  if (rows.empty()) {
    throw Error(Errc::PositivityViolation, "no rows with history " + history_label(ctx, t, lhist));
  }
  if (t == T) {
    double sw = 0, sy = 0;
    for (auto i : rows) {
      const double w = row_weight(ctx.weights, i);
      sw += w;
      sy += w * (*ctx.y)[i];
    }
    return sy / sw;
  }
  const auto& lcols = ctx.l[t];
  const std::size_t patterns = std::size_t{1} << lcols.size();
  std::vector<double> mass(patterns, 0.0);
  double total = 0;
  for (auto i : rows) {
    const double w = row_weight(ctx.weights, i);
    mass[stratum_key(lcols, i)] += w;
    total += w;
  }
  double acc = 0;
  for (std::size_t key = 0; key < patterns; ++key) {
    if (mass[key] == 0) continue;
    std::vector<std::size_t> next;
    const double want = ctx.regime[t];
    for (auto i : rows) {
      if (stratum_key(lcols, i) == key && (*ctx.x[t])[i] == want) next.push_back(i);
    }
    lhist[t] = key;
    acc += mass[key] / total * g_step(ctx, t + 1, next, lhist);
  }
  return acc;
}

}  // namespace detail

/// Expected outcome under the static regime `regime` (one 0/1 per treatment).
/// `confounders[t]` are the columns measured just before treatment t.
inline double g_formula(const Dataset& data, const std::vector<std::string>& treatments,
                        const std::vector<std::vector<std::string>>& confounders, const std::string& outcome,
                        const std::vector<int>& regime, std::span<const double> row_weights = {}) {
  if (confounders.size() != treatments.size()) {
    throw Error(Errc::LengthMismatch, "need one confounder set per treatment time");
  }
  if (regime.size() != treatments.size()) throw Error(Errc::LengthMismatch, "regime length differs from treatments");
  for (int v : regime) {
    if (v != 0 && v != 1) throw Error(Errc::ValueOutOfSupport, "regime values must be 0/1");
  }
  detail::check_row_weights(data, row_weights);
  detail::GFormulaContext ctx{data, treatments, confounders, regime, row_weights, {}, {}, &data.values(outcome)};
  for (std::size_t t = 0; t < treatments.size(); ++t) {
    ctx.x.push_back(&data.require_binary(treatments[t]));
    if (confounders[t].size() > 20) throw Error(Errc::InvalidArgument, "too many confounders at one time");
    ctx.l.push_back(binary_columns(data, confounders[t]));
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (detail::row_weight(row_weights, i) != 0) rows.push_back(i);
  }
  std::vector<std::uint64_t> lhist(treatments.size(), 0);
  return detail::g_step(ctx, 0, rows, lhist);
}

struct GFormulaFit {
  std::vector<double> regime_means;  // regime bit j = treatment j
  CoefficientMap coefficients;
};

/// All 2^T regimes followed by the saturated solve, giving coefficients
/// comparable with a saturated MSM.
inline GFormulaFit g_formula_coefficients(const Dataset& data, const std::vector<std::string>& treatments,
                                          const std::vector<std::vector<std::string>>& confounders,
                                          const std::string& outcome, std::span<const double> row_weights = {}) {
  if (treatments.size() > 16) throw Error(Errc::RegimeExplosion, "too many treatments");
  GFormulaFit fit;
  const std::size_t regimes = std::size_t{1} << treatments.size();
  for (std::size_t r = 0; r < regimes; ++r) {
    std::vector<int> regime(treatments.size());
    for (std::size_t j = 0; j < treatments.size(); ++j) regime[j] = static_cast<int>((r >> j) & 1u);
    fit.regime_means.push_back(g_formula(data, treatments, confounders, outcome, regime, row_weights));
  }
  fit.coefficients = saturated_coefficients(treatments, fit.regime_means);
  return fit;
}

/// Coefficient map wrapped as a report (no analytic standard errors), so it
/// can be bootstrapped like the regression estimators.
inline CoefficientReport g_formula_report(const Dataset& data, const std::vector<std::string>& treatments,
                                          const std::vector<std::vector<std::string>>& confounders,
                                          const std::string& outcome) {
  const auto fit = g_formula_coefficients(data, treatments, confounders, outcome);
  CoefficientReport r;
  r.n = data.rows();
  r.se_kind = "none";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [name, v] : fit.coefficients) r.terms.push_back({name, v, nan, nan, nan, {}, {}, false});
  return r;
}

}  // namespace causalkit
