#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "causalkit/bootstrap.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/regression.hpp"

namespace causalkit {

/// One factor P(X_t | conditioning columns) of the treatment-assignment law.
/// The denominator set is the unit's observed history; the numerator set is
/// what survives in the post-intervention graph (usually earlier treatments).
struct WeightFactor {
  std::string treatment;
  std::vector<std::string> denominator;
  std::vector<std::string> numerator;
};

using WeightModel = std::vector<WeightFactor>;

/// Standard longitudinal factorization: X_t given all earlier treatments and
/// confounders through t in the denominator, earlier treatments alone in the
/// numerator.
inline WeightModel history_weight_model(const std::vector<std::string>& treatments,
                                        const std::vector<std::vector<std::string>>& confounders) {
  if (confounders.size() != treatments.size()) {
    throw Error(Errc::LengthMismatch, "need one confounder set per treatment time");
  }
  WeightModel model;
  for (std::size_t t = 0; t < treatments.size(); ++t) {
    WeightFactor f;
    f.treatment = treatments[t];
    for (std::size_t s = 0; s < t; ++s) f.numerator.push_back(treatments[s]);
    f.denominator = f.numerator;
    for (std::size_t s = 0; s <= t; ++s) {
      f.denominator.insert(f.denominator.end(), confounders[s].begin(), confounders[s].end());
    }
    model.push_back(std::move(f));
  }
  return model;
}

/// User-supplied P(treatment = 1 | denominator stratum), keyed by treatment
/// name and the stratum key of the factor's denominator columns (first column
/// in bit 0). Replaces the empirical denominator for listed treatments.
using PropensityTable = std::map<std::string, std::map<std::uint64_t, double>>;

struct WeightVector {
  std::vector<double> unstabilized;  // W_i
  std::vector<double> stabilized;    // SW_i
  double mean_unstabilized = 0;
  double mean_stabilized = 0;

  const std::vector<double>& get(bool stab) const { return stab ? stabilized : unstabilized; }
};

namespace detail {

// P(X = observed | stratum) per row, from saturated stratified frequencies.
inline std::vector<double> empirical_probability(const Dataset& data, const std::string& treatment,
                                                 const std::vector<std::string>& cond) {
  const auto& x = data.require_binary(treatment);
  const auto cols = binary_columns(data, cond);
  std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> counts;  // (n, treated)
  std::vector<std::uint64_t> keys(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    keys[i] = stratum_key(cols, i);
    auto& c = counts[keys[i]];
    ++c.first;
    if (x[i] != 0.0) ++c.second;
  }
  std::vector<double> p(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto& c = counts[keys[i]];
    const double p1 = static_cast<double>(c.second) / static_cast<double>(c.first);
    p[i] = x[i] != 0.0 ? p1 : 1 - p1;
  }
  return p;
}

}  // namespace detail

/// Inverse-probability-of-treatment weights under `model`.
inline WeightVector iptw_weights(const Dataset& data, const WeightModel& model,
                                 const PropensityTable* override_table = nullptr) {
  const std::size_t n = data.rows();
  std::vector<double> denom(n, 1.0), numer(n, 1.0);
  for (const auto& f : model) {
    std::vector<double> pd;
    auto it = override_table ? override_table->find(f.treatment) : PropensityTable::const_iterator{};
    if (override_table && it != override_table->end()) {
      const auto& x = data.require_binary(f.treatment);
      const auto cols = binary_columns(data, f.denominator);
      pd.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto key = stratum_key(cols, i);
        auto p = it->second.find(key);
        if (p == it->second.end()) {
          throw Error(Errc::ZeroDenominator, "propensity table for '" + f.treatment + "' lacks stratum " +
                                                 std::to_string(key));
        }
        pd[i] = x[i] != 0.0 ? p->second : 1 - p->second;
      }
    } else {
      pd = detail::empirical_probability(data, f.treatment, f.denominator);
    }
    const auto pn = detail::empirical_probability(data, f.treatment, f.numerator);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(pd[i] > 0)) {
        throw Error(Errc::ZeroDenominator, "row " + std::to_string(i) + ": P(" + f.treatment +
                                               " = observed | history) is zero");
      }
      denom[i] *= pd[i];
      numer[i] *= pn[i];
    }
  }
  WeightVector w;
  w.unstabilized.resize(n);
  w.stabilized.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.unstabilized[i] = 1.0 / denom[i];
    w.stabilized[i] = numer[i] / denom[i];
    w.mean_unstabilized += w.unstabilized[i];
    w.mean_stabilized += w.stabilized[i];
  }
  w.mean_unstabilized /= static_cast<double>(n);
  w.mean_stabilized /= static_cast<double>(n);
  return w;
}

inline WeightVector iptw_weights(const Dataset& data, const std::vector<std::string>& treatments,
                                 const std::vector<std::vector<std::string>>& confounders) {
  return iptw_weights(data, history_weight_model(treatments, confounders));
}

/// Marginal structural model: weighted least squares of the outcome on
/// treatment terms only. Standard errors are HC0 sandwich.
inline CoefficientReport fit_msm(const Dataset& data, const std::vector<double>& weights, const std::string& outcome,
                                 const std::vector<Term>& treatment_terms) {
  return fit_wls(data, outcome, treatment_terms, weights);
}

inline CoefficientReport fit_msm(const Dataset& data, const WeightVector& weights, const std::string& outcome,
                                 const std::vector<Term>& treatment_terms, bool stabilized = true) {
  return fit_msm(data, weights.get(stabilized), outcome, treatment_terms);
}

/// MSM with percentile intervals; weights are re-estimated inside every
/// replicate so the interval reflects propensity estimation too.
inline CoefficientReport msm_bootstrap(const Dataset& data, const WeightModel& model, const std::string& outcome,
                                       const std::vector<Term>& treatment_terms, std::size_t replicates,
                                       double level, std::uint64_t seed, bool stabilized = true) {
  const Estimator est = [&](const Dataset& d) {
    return fit_msm(d, iptw_weights(d, model), outcome, treatment_terms, stabilized);
  };
  return bootstrap_ci(data, est, replicates, level, seed);
}

/// Weighted covariance of two columns (weights normalized to sum one).
inline double weighted_covariance(const std::vector<double>& a, const std::vector<double>& b,
                                  const std::vector<double>& w) {
  double sw = 0, ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sw += w[i];
    ma += w[i] * a[i];
    mb += w[i] * b[i];
  }
  ma /= sw;
  mb /= sw;
  double c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += w[i] * (a[i] - ma) * (b[i] - mb);
  return c / sw;
}

}  // namespace causalkit
