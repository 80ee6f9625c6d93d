#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causalkit/dataset.hpp"
#include "causalkit/scm.hpp"

namespace causalkit {

// Backdoor standardization, potential-outcome contrasts and positivity
// diagnostics. All of them assume conditional exchangeability given the
// columns the caller supplies; nothing here can test that assumption.

namespace detail {

inline double row_weight(std::span<const double> w, std::size_t i) { return w.empty() ? 1.0 : w[i]; }

inline void check_row_weights(const Dataset& data, std::span<const double> w) {
  if (!w.empty() && w.size() != data.rows()) {
    throw Error(Errc::LengthMismatch, "row weights do not match the dataset");
  }
}

inline std::string describe_stratum(const std::vector<std::string>& names, std::uint64_t key) {
  if (names.empty()) return "(all)";
  std::string s;
  for (std::size_t j = 0; j < names.size(); ++j) {
    s += (j ? "," : "") + names[j] + "=" + ((key >> j) & 1u ? "1" : "0");
  }
  return s;
}

}  // namespace detail

struct StandardizeResult {
  double mean_untreated = 0;  // E[Y | do(X=0)]
  double mean_treated = 0;    // E[Y | do(X=1)]
  double ate = 0;
  std::size_t strata = 0;

  double mean(int level) const { return level ? mean_treated : mean_untreated; }
};

/// E[Y | do(x)] = sum_z E[Y | X=x, Z=z] P(Z=z). Optional row weights turn
/// the table into a weighted (e.g. exactly enumerated) distribution.
inline StandardizeResult standardize(const Dataset& data, const std::string& treatment, const std::string& outcome,
                                     const std::vector<std::string>& adjustment,
                                     std::span<const double> row_weights = {}) {
  detail::check_row_weights(data, row_weights);
  const auto& x = data.require_binary(treatment);
  const auto& y = data.values(outcome);
  const auto z = binary_columns(data, adjustment);

  struct Cell {
    double weight[2] = {0, 0};
    double sum[2] = {0, 0};
  };
  std::map<std::uint64_t, Cell> cells;
  double total = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const double w = detail::row_weight(row_weights, i);
    if (w == 0) continue;
    auto& c = cells[stratum_key(z, i)];
    const int level = x[i] != 0.0;
    c.weight[level] += w;
    c.sum[level] += w * y[i];
    total += w;
  }
  std::string empty;
  for (const auto& [key, c] : cells) {
    for (int level = 0; level < 2; ++level) {
      if (c.weight[level] == 0) {
        empty += (empty.empty() ? "" : "; ") + treatment + "=" + std::to_string(level) + " with " +
                 detail::describe_stratum(adjustment, key);
      }
    }
  }
  if (!empty.empty()) throw Error(Errc::PositivityViolation, "empty strata: " + empty);

  StandardizeResult r;
  r.strata = cells.size();
  for (const auto& [key, c] : cells) {
    const double pz = (c.weight[0] + c.weight[1]) / total;
    r.mean_untreated += c.sum[0] / c.weight[0] * pz;
    r.mean_treated += c.sum[1] / c.weight[1] * pz;
  }
  r.ate = r.mean_treated - r.mean_untreated;
  return r;
}

struct Contrasts {
  double ate = 0;
  double att = 0;
  double atu = 0;
  std::optional<double> cate;
  double treated_fraction = 0;
};

/// Sample contrasts of a single-treatment potential-outcome table. The
/// optional `subgroup` names a binary column of the factual draw; CATE is
/// taken over the units where it equals 1.
inline Contrasts po_contrasts(const PotentialOutcomeTable& po, const std::optional<std::string>& subgroup = {}) {
  if (po.treatments.size() != 1 || po.regimes() != 2) {
    throw Error(Errc::InvalidArgument, "contrasts need exactly one binary treatment");
  }
  const auto& y0 = po.regime_outcomes[0];
  const auto& y1 = po.regime_outcomes[1];
  const std::vector<double>* pred = subgroup ? &po.factual.require_binary(*subgroup) : nullptr;
  double all = 0, treated = 0, untreated = 0, sub = 0;
  std::size_t n_treated = 0, n_untreated = 0, n_sub = 0;
  for (std::size_t i = 0; i < po.units(); ++i) {
    const double d = y1[i] - y0[i];
    all += d;
    if (po.factual_regime[i] == 1) {
      treated += d;
      ++n_treated;
    } else {
      untreated += d;
      ++n_untreated;
    }
    if (pred && (*pred)[i] != 0.0) {
      sub += d;
      ++n_sub;
    }
  }
  if (n_treated == 0) throw Error(Errc::EmptySubgroup, "no treated units");
  if (n_untreated == 0) throw Error(Errc::EmptySubgroup, "no untreated units");
  if (pred && n_sub == 0) throw Error(Errc::EmptySubgroup, "subgroup '" + *subgroup + "' is empty");
  Contrasts c;
  c.ate = all / static_cast<double>(po.units());
  c.att = treated / static_cast<double>(n_treated);
  c.atu = untreated / static_cast<double>(n_untreated);
  if (pred) c.cate = sub / static_cast<double>(n_sub);
  c.treated_fraction = static_cast<double>(n_treated) / static_cast<double>(po.units());
  return c;
}

enum class StratumFlag { Ok, Boundary, Empty };

inline std::string_view flag_name(StratumFlag f) {
  switch (f) {
    case StratumFlag::Ok: return "ok";
    case StratumFlag::Boundary: return "boundary";
    case StratumFlag::Empty: return "empty";
  }
  return "ok";
}

struct PositivityEntry {
  std::string treatment;
  std::vector<std::pair<std::string, int>> stratum;
  std::size_t count = 0;
  double p_treated = std::numeric_limits<double>::quiet_NaN();
  StratumFlag flag = StratumFlag::Empty;

  std::string describe() const {
    if (stratum.empty()) return "(all)";
    std::string s;
    for (const auto& [k, v] : stratum) s += (s.empty() ? "" : ",") + k + "=" + std::to_string(v);
    return s;
  }

  bool matches(const std::vector<std::pair<std::string, int>>& want) const {
    for (const auto& w : want) {
      if (std::find(stratum.begin(), stratum.end(), w) == stratum.end()) return false;
    }
    return true;
  }
};

struct PositivityReport {
  std::vector<PositivityEntry> entries;

  std::size_t count(StratumFlag f) const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                  [f](const auto& e) { return e.flag == f; }));
  }
};

/// For each treatment time t, every stratum of (earlier treatments, confounders
/// through t) with its size and empirical P(X_t = 1).
inline PositivityReport positivity_check(const Dataset& data, const std::vector<std::string>& treatments,
                                         const std::vector<std::vector<std::string>>& confounders) {
  if (confounders.size() != treatments.size()) {
    throw Error(Errc::LengthMismatch, "need one confounder set per treatment time");
  }
  PositivityReport report;
  for (std::size_t t = 0; t < treatments.size(); ++t) {
    std::vector<std::string> cond;
    for (std::size_t s = 0; s < t; ++s) cond.push_back(treatments[s]);
    for (std::size_t s = 0; s <= t; ++s) cond.insert(cond.end(), confounders[s].begin(), confounders[s].end());
    if (cond.size() > 20) throw Error(Errc::InvalidArgument, "too many stratification columns");
    const auto cols = binary_columns(data, cond);
    const auto& x = data.require_binary(treatments[t]);
    std::vector<std::size_t> count(std::size_t{1} << cond.size(), 0), treated(count.size(), 0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
      const auto key = stratum_key(cols, i);
      ++count[key];
      if (x[i] != 0.0) ++treated[key];
    }
    for (std::size_t key = 0; key < count.size(); ++key) {
      PositivityEntry e;
      e.treatment = treatments[t];
      for (std::size_t j = 0; j < cond.size(); ++j) e.stratum.emplace_back(cond[j], static_cast<int>((key >> j) & 1u));
      e.count = count[key];
      if (e.count == 0) {
        e.flag = StratumFlag::Empty;
      } else {
        e.p_treated = static_cast<double>(treated[key]) / static_cast<double>(e.count);
        e.flag = (treated[key] == 0 || treated[key] == e.count) ? StratumFlag::Boundary : StratumFlag::Ok;
      }
      report.entries.push_back(std::move(e));
    }
  }
  return report;
}

}  // namespace causalkit
