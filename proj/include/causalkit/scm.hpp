#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "causalkit/dag.hpp"
#include "causalkit/dataset.hpp"
#include "causalkit/noise.hpp"
#include "causalkit/saturated.hpp"

namespace causalkit {

/// P(node = 1) = intercept + sum coef * parent; parents must be binary.
struct BernoulliLinear {
  double intercept = 0;
  std::map<std::string, double> coefficients;
};

struct GaussianTerm {
  std::vector<std::string> parents;  // empty = constant shift
  double coef = 0;
};

/// node ~ N(intercept + sum coef * prod(parents), sigma^2)
struct GaussianLinear {
  double intercept = 0;
  std::vector<GaussianTerm> terms;
  double sigma = 1;
};

/// Result of do(node = value).
struct Constant {
  double value = 0;
  bool binary = true;
};

using Equation = std::variant<BernoulliLinear, GaussianLinear, Constant>;

inline bool is_binary(const Equation& eq) {
  if (std::holds_alternative<BernoulliLinear>(eq)) return true;
  if (const auto* c = std::get_if<Constant>(&eq)) return c->binary;
  return false;
}

inline constexpr double kProbabilityTolerance = 1e-12;

class StructuralModel {
 public:
  StructuralModel() = default;

  /// Validates the equations against the graph. Strata whose success
  /// probability is exactly 0 or 1 are accepted and recorded in warnings().
  static StructuralModel build(CausalDag dag, std::map<std::string, Equation> equations) {
    StructuralModel m;
    for (const auto& [node, _] : equations) {
      if (!dag.has_node(node)) throw Error(Errc::UnknownNode, "equation for undeclared node '" + node + "'");
    }
    for (const auto& node : dag.topological_order()) {
      auto it = equations.find(node);
      if (it == equations.end()) throw Error(Errc::MissingEquation, "'" + node + "'");
      m.validate(dag, node, it->second, equations);
    }
    m.dag_ = std::move(dag);
    m.equations_ = std::move(equations);
    m.compile();
    return m;
  }

  const CausalDag& dag() const { return dag_; }
  const std::map<std::string, Equation>& equations() const { return equations_; }
  const Equation& equation(const std::string& node) const { return equations_.at(dag_.require(node)); }
  const std::vector<std::string>& order() const { return dag_.topological_order(); }
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool binary(const std::string& node) const { return is_binary(equation(node)); }

  /// Evaluates one unit. `values` is indexed like order().
  void draw_unit(std::uint64_t seed, std::uint64_t unit, std::vector<double>& values) const {
    values.resize(compiled_.size());
    for (std::size_t k = 0; k < compiled_.size(); ++k) {
      const auto& c = compiled_[k];
      switch (c.kind) {
        case Kind::Constant:
          values[k] = c.intercept;
          break;
        case Kind::Bernoulli: {
          double p = c.intercept;
          for (const auto& t : c.terms) p += t.coef * values[t.parents.front()];
          values[k] = noise::uniform(seed, unit, c.key) < p ? 1.0 : 0.0;
          break;
        }
        case Kind::Gaussian: {
          double mu = c.intercept;
          for (const auto& t : c.terms) {
            double prod = t.coef;
            for (auto p : t.parents) prod *= values[p];
            mu += prod;
          }
          values[k] = mu + c.sigma * noise::standard_normal(seed, unit, c.key);
          break;
        }
      }
    }
  }

 private:
  enum class Kind { Bernoulli, Gaussian, Constant };
  struct CompiledTerm {
    std::vector<std::size_t> parents;
    double coef;
  };
  struct Compiled {
    Kind kind;
    double intercept;
    double sigma;
    std::uint64_t key;
    std::vector<CompiledTerm> terms;
  };

  void validate(const CausalDag& dag, const std::string& node, const Equation& eq,
                const std::map<std::string, Equation>& all) {
    const NodeSet& parents = dag.parents(node);
    if (const auto* b = std::get_if<BernoulliLinear>(&eq)) {
      NodeSet referenced;
      for (const auto& [p, _] : b->coefficients) referenced.insert(p);
      if (referenced != parents) {
        throw Error(Errc::ParentMismatch, "equation of '" + node + "' references {" + join(referenced) +
                                              "} but its parents are {" + join(parents) + "}");
      }
      std::vector<std::pair<std::string, double>> coefs(b->coefficients.begin(), b->coefficients.end());
      for (const auto& [p, _] : coefs) {
        if (!is_binary(all.at(p))) {
          throw Error(Errc::UnsupportedEquationForm, "Bernoulli node '" + node + "' has non-binary parent '" + p + "'");
        }
      }
      if (coefs.size() > 20) throw Error(Errc::UnsupportedEquationForm, "too many parents on '" + node + "'");
      for (std::uint32_t mask = 0; mask < (1u << coefs.size()); ++mask) {
        double prob = b->intercept;
        for (std::size_t j = 0; j < coefs.size(); ++j) {
          if (mask & (1u << j)) prob += coefs[j].second;
        }
        std::string pattern;
        for (std::size_t j = 0; j < coefs.size(); ++j) {
          pattern += (j ? "," : "") + coefs[j].first + "=" + ((mask & (1u << j)) ? "1" : "0");
        }
        std::ostringstream os;
        os << "P(" << node << "=1 | " << (pattern.empty() ? "-" : pattern) << ") = " << prob;
        if (prob < -kProbabilityTolerance || prob > 1 + kProbabilityTolerance) {
          throw Error(Errc::ProbabilityOutOfRange, os.str());
        }
        if (std::abs(prob) <= kProbabilityTolerance || std::abs(prob - 1) <= kProbabilityTolerance) {
          warnings_.push_back("boundary probability: " + os.str());
        }
      }
    } else if (const auto* g = std::get_if<GaussianLinear>(&eq)) {
      if (!(g->sigma > 0)) throw Error(Errc::NonPositiveSigma, "'" + node + "'");
      NodeSet referenced;
      for (const auto& t : g->terms) referenced.insert(t.parents.begin(), t.parents.end());
      if (referenced != parents) {
        throw Error(Errc::ParentMismatch, "equation of '" + node + "' references {" + join(referenced) +
                                              "} but its parents are {" + join(parents) + "}");
      }
    } else {
      const auto& c = std::get<Constant>(eq);
      if (!parents.empty()) throw Error(Errc::ParentMismatch, "constant node '" + node + "' has parents");
      if (c.binary && c.value != 0.0 && c.value != 1.0) {
        throw Error(Errc::ValueOutOfSupport, "'" + node + "' is binary");
      }
    }
  }

  void compile() {
    std::map<std::string, std::size_t> pos;
    const auto& order = dag_.topological_order();
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
    compiled_.clear();
    for (const auto& node : order) {
      Compiled c{Kind::Constant, 0, 0, noise::key_of(node), {}};
      const auto& eq = equations_.at(node);
      if (const auto* b = std::get_if<BernoulliLinear>(&eq)) {
        c.kind = Kind::Bernoulli;
        c.intercept = b->intercept;
        for (const auto& [p, coef] : b->coefficients) c.terms.push_back({{pos.at(p)}, coef});
      } else if (const auto* g = std::get_if<GaussianLinear>(&eq)) {
        c.kind = Kind::Gaussian;
        c.intercept = g->intercept;
        c.sigma = g->sigma;
        for (const auto& t : g->terms) {
          CompiledTerm ct{{}, t.coef};
          for (const auto& p : t.parents) ct.parents.push_back(pos.at(p));
          c.terms.push_back(std::move(ct));
        }
      } else {
        c.intercept = std::get<Constant>(eq).value;
      }
      compiled_.push_back(std::move(c));
    }
  }

  static std::string join(const NodeSet& s) {
    std::string out;
    for (const auto& x : s) out += (out.empty() ? "" : ",") + x;
    return out;
  }

  CausalDag dag_;
  std::map<std::string, Equation> equations_;
  std::vector<std::string> warnings_;
  std::vector<Compiled> compiled_;
};

inline StructuralModel build_scm(CausalDag dag, std::map<std::string, Equation> equations) {
  return StructuralModel::build(std::move(dag), std::move(equations));
}

/// n draws; column order is the model's topological order. Unit i only
/// depends on (seed, i), so any split of [0, n) reproduces this result.
inline Dataset simulate(const StructuralModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(Errc::InvalidArgument, "n must be positive");
  const auto& order = model.order();
  std::vector<std::vector<double>> cols(order.size(), std::vector<double>(n));
  std::vector<double> unit;
  for (std::size_t i = 0; i < n; ++i) {
    model.draw_unit(seed, i, unit);
    for (std::size_t k = 0; k < order.size(); ++k) cols[k][i] = unit[k];
  }
  Dataset out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.add_column(order[k], model.binary(order[k]) ? ColumnKind::Binary : ColumnKind::Continuous,
                   std::move(cols[k]));
  }
  return out;
}

/// do(assignment): assigned nodes become constants and lose their in-edges.
inline StructuralModel apply_intervention(const StructuralModel& model,
                                          const std::map<std::string, double>& assignment) {
  if (assignment.empty()) return model;
  NodeSet targets;
  auto equations = model.equations();
  for (const auto& [node, value] : assignment) {
    model.dag().require(node);
    const bool binary = model.binary(node);
    if (binary && value != 0.0 && value != 1.0) {
      throw Error(Errc::ValueOutOfSupport, "'" + node + "' takes values in {0,1}, got " + format_number(value));
    }
    if (!std::isfinite(value)) throw Error(Errc::ValueOutOfSupport, "'" + node + "'");
    equations[node] = Constant{value, binary};
    targets.insert(node);
  }
  return StructuralModel::build(intervene(model.dag(), targets), std::move(equations));
}

/// Per-unit outcomes under every joint regime of `treatments`, all computed
/// from the same exogenous noise, plus the factual (unintervened) draw.
struct PotentialOutcomeTable {
  std::vector<std::string> treatments;
  std::string outcome;
  std::vector<std::vector<double>> regime_outcomes;  // [regime][unit]; regime bit j = treatments[j]
  std::vector<std::size_t> factual_regime;
  std::vector<double> factual_outcome;
  Dataset factual;

  std::size_t units() const { return factual_outcome.size(); }
  std::size_t regimes() const { return regime_outcomes.size(); }
};

inline PotentialOutcomeTable potential_outcomes(const StructuralModel& model,
                                                const std::vector<std::string>& treatments,
                                                const std::string& outcome, std::size_t n,
                                                std::uint64_t seed, std::size_t regime_cap = 4096) {
  model.dag().require(outcome);
  for (const auto& t : treatments) {
    if (!model.binary(t)) throw Error(Errc::InvalidArgument, "treatment '" + t + "' is not binary");
    if (t == outcome) throw Error(Errc::InvalidArgument, "outcome listed as a treatment");
  }
  if (treatments.size() >= 63 || (std::size_t{1} << treatments.size()) > regime_cap) {
    throw Error(Errc::RegimeExplosion, std::to_string(treatments.size()) + " treatments exceed the regime cap");
  }
  PotentialOutcomeTable po;
  po.treatments = treatments;
  po.outcome = outcome;
  po.factual = simulate(model, n, seed);
  po.factual_outcome = po.factual.values(outcome);
  po.factual_regime.assign(n, 0);
  for (std::size_t j = 0; j < treatments.size(); ++j) {
    const auto& col = po.factual.values(treatments[j]);
    for (std::size_t i = 0; i < n; ++i) {
      if (col[i] != 0.0) po.factual_regime[i] |= std::size_t{1} << j;
    }
  }
  const std::size_t regimes = std::size_t{1} << treatments.size();
  for (std::size_t r = 0; r < regimes; ++r) {
    std::map<std::string, double> assign;
    for (std::size_t j = 0; j < treatments.size(); ++j) assign[treatments[j]] = (r >> j) & 1u;
    po.regime_outcomes.push_back(simulate(apply_intervention(model, assign), n, seed).values(outcome));
  }
  return po;
}

struct MsmTruthOptions {
  bool allow_monte_carlo = true;
  bool force_monte_carlo = false;
  std::size_t monte_carlo_n = 1'000'000;
  std::uint64_t monte_carlo_seed = 20240601;
};

struct MsmTruth {
  CoefficientMap coefficients;
  bool analytic = true;
  std::vector<double> regime_means;
};

namespace detail {

// E[outcome] in a post-intervention model by pushing means forward. Exact when
// every Gaussian product term has at most one non-constant factor: Bernoulli
// equations are linear, so E[node] is the equation evaluated at parent means.
inline std::optional<double> propagate_mean(const StructuralModel& model, const std::string& outcome) {
  std::map<std::string, double> mean;
  std::map<std::string, bool> fixed;
  for (const auto& node : model.order()) {
    const auto& eq = model.equation(node);
    if (const auto* c = std::get_if<Constant>(&eq)) {
      mean[node] = c->value;
      fixed[node] = true;
    } else if (const auto* b = std::get_if<BernoulliLinear>(&eq)) {
      double m = b->intercept;
      for (const auto& [p, coef] : b->coefficients) m += coef * mean.at(p);
      mean[node] = m;
      fixed[node] = false;
    } else {
      const auto& g = std::get<GaussianLinear>(eq);
      double m = g.intercept;
      for (const auto& t : g.terms) {
        int random_factors = 0;
        double prod = t.coef;
        for (const auto& p : t.parents) {
          if (!fixed.at(p)) ++random_factors;
          prod *= mean.at(p);
        }
        if (random_factors > 1) return std::nullopt;
        m += prod;
      }
      mean[node] = m;
      fixed[node] = false;
    }
    if (node == outcome) return mean[node];
  }
  return mean.at(outcome);
}

}  // namespace detail

/// Coefficients of the saturated marginal structural model
/// E[Y | do(x)] = sum_S beta_S prod_{j in S} x_j, from exact post-intervention
/// means when possible and Monte Carlo otherwise.
inline MsmTruth true_msm_coefficients(const StructuralModel& model,
                                      const std::vector<std::string>& treatments,
                                      const std::string& outcome, const MsmTruthOptions& opt = {}) {
  model.dag().require(outcome);
  for (const auto& t : treatments) {
    if (!model.binary(t)) throw Error(Errc::UnsupportedEquationForm, "treatment '" + t + "' is not binary");
  }
  if (treatments.size() > 20) throw Error(Errc::RegimeExplosion, "too many treatments");
  const std::size_t regimes = std::size_t{1} << treatments.size();
  MsmTruth truth;
  truth.regime_means.resize(regimes);
  for (std::size_t r = 0; r < regimes; ++r) {
    std::map<std::string, double> assign;
    for (std::size_t j = 0; j < treatments.size(); ++j) assign[treatments[j]] = (r >> j) & 1u;
    const auto post = apply_intervention(model, assign);
    std::optional<double> m;
    if (!opt.force_monte_carlo) m = detail::propagate_mean(post, outcome);
    if (!m) {
      if (!opt.allow_monte_carlo) {
        throw Error(Errc::UnsupportedEquationForm, "outcome mean is not a linear function of confounder means");
      }
      truth.analytic = false;
      const auto sample = simulate(post, opt.monte_carlo_n, opt.monte_carlo_seed);
      const auto& y = sample.values(outcome);
      double s = 0;
      for (double v : y) s += v;
      m = s / static_cast<double>(y.size());
    }
    truth.regime_means[r] = *m;
  }
  truth.coefficients = saturated_coefficients(treatments, truth.regime_means);
  return truth;
}

}  // namespace causalkit
