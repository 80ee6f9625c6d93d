#pragma once

// Test-only brute-force oracles. Nothing here calls the library's inference
// code: joint distributions are enumerated directly from conditional tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "causalkit/dag.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/scm.hpp"

namespace oracle {

/// Random DAG over nodes N0..N{k-1}: shuffle an order, then add each forward
/// pair with probability `density`.
inline causalkit::CausalDag random_dag(std::mt19937_64& rng, int k, double density) {
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i) names.push_back("N" + std::to_string(i));
  std::vector<std::string> order = names;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(density);
  std::vector<causalkit::Edge> edges;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (coin(rng)) edges.emplace_back(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
  }
  std::vector<causalkit::NodeSpec> nodes;
  for (const auto& n : names) nodes.push_back({n, causalkit::Role::Generic});
  return causalkit::build_dag(nodes, edges);
}

/// Joint law of binary nodes given full conditional probability tables with
/// generic entries. Index of a configuration: bit i = node i of `nodes`.
struct Joint {
  std::vector<std::string> nodes;
  std::vector<double> prob;

  int index_of(const std::string& n) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] == n) return static_cast<int>(i);
    }
    return -1;
  }
};

inline Joint random_joint(std::mt19937_64& rng, const causalkit::CausalDag& dag) {
  Joint j;
  j.nodes = dag.nodes();
  const std::size_t k = j.nodes.size();
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  // cpt[node][parent configuration] = P(node = 1 | parents)
  std::vector<std::vector<double>> cpt(k);
  std::vector<std::vector<int>> parent_idx(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& p : dag.parents(j.nodes[i])) parent_idx[i].push_back(j.index_of(p));
    cpt[i].resize(std::size_t{1} << parent_idx[i].size());
    for (auto& v : cpt[i]) v = unif(rng);
  }
  j.prob.assign(std::size_t{1} << k, 1.0);
  for (std::size_t cfg = 0; cfg < j.prob.size(); ++cfg) {
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t pc = 0;
      for (std::size_t b = 0; b < parent_idx[i].size(); ++b) {
        if ((cfg >> parent_idx[i][b]) & 1u) pc |= std::size_t{1} << b;
      }
      const double p1 = cpt[i][pc];
      j.prob[cfg] *= ((cfg >> i) & 1u) ? p1 : 1 - p1;
    }
  }
  return j;
}

/// Numeric conditional independence of x and y given z by exhaustive
/// enumeration: |P(x,y|z) - P(x|z)P(y|z)| < tol in every stratum with P(z) > 0.
inline bool independent(const Joint& j, int x, int y, const std::vector<int>& z, double tol = 1e-9) {
  const std::size_t zc = std::size_t{1} << z.size();
  for (std::size_t zcfg = 0; zcfg < zc; ++zcfg) {
    double pz = 0, pxyz[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t cfg = 0; cfg < j.prob.size(); ++cfg) {
      bool match = true;
      for (std::size_t b = 0; b < z.size(); ++b) {
        if (((cfg >> z[b]) & 1u) != ((zcfg >> b) & 1u)) { match = false; break; }
      }
      if (!match) continue;
      pz += j.prob[cfg];
      pxyz[(cfg >> x) & 1u][(cfg >> y) & 1u] += j.prob[cfg];
    }
    if (pz <= 0) continue;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double pxy = pxyz[a][b] / pz;
        const double px = (pxyz[a][0] + pxyz[a][1]) / pz;
        const double py = (pxyz[0][b] + pxyz[1][b]) / pz;
        if (std::abs(pxy - px * py) >= tol) return false;
      }
    }
  }
  return true;
}


/// Small longitudinal binary SCM drawn at random: variables in time order,
/// every forward pair joined with probability 0.6, linear-probability
/// equations with all probabilities inside [0.05, 0.95].
struct SmallScm {
  causalkit::StructuralModel model;
  std::vector<std::string> treatments;
  std::vector<std::vector<std::string>> confounders;
  std::string outcome = "Y";
};

inline SmallScm random_small_scm(std::mt19937_64& rng) {
  // layouts with at most four nodes; "X*" are treatments
  static const std::vector<std::vector<std::string>> layouts{
      {"L1", "X1", "Y"}, {"X1", "L2", "X2", "Y"}, {"L1", "X1", "X2", "Y"}, {"L1", "L2", "X1", "Y"}};
  const auto& order = layouts[rng() % layouts.size()];
  SmallScm s;
  std::vector<std::string> pending;
  for (const auto& v : order) {
    if (v == "Y") break;
    if (v[0] == 'X') {
      s.treatments.push_back(v);
      s.confounders.push_back(pending);
      pending.clear();
    } else {
      pending.push_back(v);
    }
  }
  std::bernoulli_distribution coin(0.6);
  std::uniform_real_distribution<double> coef(-0.25, 0.25), unit(0, 1);
  std::vector<causalkit::NodeSpec> nodes;
  std::vector<causalkit::Edge> edges;
  std::map<std::string, causalkit::Equation> eqs;
  for (std::size_t i = 0; i < order.size(); ++i) {
    nodes.push_back({order[i], causalkit::Role::Generic});
    causalkit::BernoulliLinear eq;
    double lo = 0, hi = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (!coin(rng)) continue;
      edges.emplace_back(order[j], order[i]);
      const double c = coef(rng);
      eq.coefficients[order[j]] = c;
      (c < 0 ? lo : hi) += c;
    }
    // intercept range keeping every parent pattern inside [0.05, 0.95]
    const double a_min = 0.05 - lo, a_max = 0.95 - hi;
    eq.intercept = a_min + unit(rng) * (a_max - a_min);
    eqs[order[i]] = eq;
  }
  s.model = causalkit::build_scm(causalkit::build_dag(nodes, edges), eqs);
  return s;
}

inline double bernoulli_p(const causalkit::BernoulliLinear& eq, const std::map<std::string, int>& values) {
  double p = eq.intercept;
  for (const auto& [parent, c] : eq.coefficients) p += c * values.at(parent);
  return p;
}

/// Every configuration of an all-Bernoulli model as one row, with its exact
/// probability as the row weight.
inline std::pair<causalkit::Dataset, std::vector<double>> enumerate(const causalkit::StructuralModel& m) {
  const auto& order = m.order();
  const std::size_t k = order.size();
  std::vector<std::vector<double>> cols(k);
  std::vector<double> weight;
  for (std::size_t cfg = 0; cfg < (std::size_t{1} << k); ++cfg) {
    std::map<std::string, int> v;
    for (std::size_t i = 0; i < k; ++i) v[order[i]] = static_cast<int>((cfg >> i) & 1u);
    double w = 1;
    for (std::size_t i = 0; i < k; ++i) {
      const double p = bernoulli_p(std::get<causalkit::BernoulliLinear>(m.equation(order[i])), v);
      w *= v[order[i]] ? p : 1 - p;
      cols[i].push_back(v[order[i]]);
    }
    weight.push_back(w);
  }
  causalkit::Dataset d;
  for (std::size_t i = 0; i < k; ++i) d.add_column(order[i], causalkit::ColumnKind::Binary, cols[i]);
  return {d, weight};
}

/// E[outcome] under do(treatments = regime) by the truncated factorization:
/// treatment factors are dropped and treatments pinned.
inline double do_mean(const SmallScm& s, const std::vector<int>& regime) {
  const auto& order = s.model.order();
  const std::size_t k = order.size();
  double total = 0;
  for (std::size_t cfg = 0; cfg < (std::size_t{1} << k); ++cfg) {
    std::map<std::string, int> v;
    for (std::size_t i = 0; i < k; ++i) v[order[i]] = static_cast<int>((cfg >> i) & 1u);
    bool consistent = true;
    for (std::size_t t = 0; t < s.treatments.size(); ++t) consistent &= v[s.treatments[t]] == regime[t];
    if (!consistent) continue;
    double w = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (std::find(s.treatments.begin(), s.treatments.end(), order[i]) != s.treatments.end()) continue;
      const double p = bernoulli_p(std::get<causalkit::BernoulliLinear>(s.model.equation(order[i])), v);
      w *= v[order[i]] ? p : 1 - p;
    }
    total += w * v[s.outcome];
  }
  return total;
}

/// The feedback design with P(X2=1 | X1=0, L2=1) lowered from 1.0 to 0.9, so
/// every treatment history has positive probability.
inline causalkit::StructuralModel feedback_with_positivity(const causalkit::StructuralModel& feedback) {
  auto eqs = feedback.equations();
  std::get<causalkit::BernoulliLinear>(eqs.at("X2")).coefficients.at("L2") = 0.6;
  return causalkit::build_scm(feedback.dag(), eqs);
}

}  // namespace oracle
