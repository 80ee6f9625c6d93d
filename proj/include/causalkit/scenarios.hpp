#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causalkit/bootstrap.hpp"
#include "causalkit/g_formula.hpp"
#include "causalkit/iptw.hpp"
#include "causalkit/regression.hpp"
#include "causalkit/scm.hpp"

namespace causalkit {

enum class MethodKind { Ols, MsmIptw, GFormula };

/// Which coefficients a method is compared against: the scenario's reference
/// truth (the coefficients the study tabulates) or the saturated MSM truth.
enum class TruthSource { Reference, Marginal };

struct MethodSpec {
  std::string id;
  MethodKind kind = MethodKind::Ols;
  std::vector<std::string> adjustment;  // extra OLS main effects
  bool uses_unobserved = false;         // bypasses the observability mask
  TruthSource truth = TruthSource::Reference;
  bool expect_unbiased = true;
  std::set<std::string> claimed_biased;  // terms the study says are off
  double bias_threshold = 0.3;
  std::string label;
};

struct ScenarioSpec {
  std::string id;
  std::string anchor;  // caption of the table the scenario reproduces
  StructuralModel model;
  std::vector<std::string> observed;
  std::vector<std::string> treatments;
  std::vector<std::vector<std::string>> confounders;  // observed, per treatment time
  std::string outcome;
  WeightModel weights;
  CoefficientMap reference_truth;  // as tabulated, Intercept first
  CoefficientMap marginal_truth;   // saturated MSM truth of the model
  std::vector<MethodSpec> methods;
  std::vector<std::string> default_methods;

  const MethodSpec& method(const std::string& id_) const {
    for (const auto& m : methods) {
      if (m.id == id_) return m;
    }
    throw Error(Errc::InvalidMethodForScenario, "'" + id_ + "' is not available for " + id);
  }

  const CoefficientMap& truth_for(const MethodSpec& m) const {
    return m.truth == TruthSource::Reference ? reference_truth : marginal_truth;
  }

  std::vector<Term> treatment_terms() const { return saturated_terms(treatments); }
};

namespace scenario_detail {

inline BernoulliLinear bern(double intercept, std::map<std::string, double> coefs = {}) {
  return {intercept, std::move(coefs)};
}

inline GaussianLinear gauss(double intercept, std::vector<GaussianTerm> terms, double sigma) {
  return {intercept, std::move(terms), sigma};
}

inline NodeSpec node(std::string id, Role role) { return {std::move(id), role}; }

inline MethodSpec ols(std::string id, std::vector<std::string> adjustment, bool expect_unbiased,
                      std::set<std::string> claimed_biased = {}, double bias_threshold = 0.3,
                      std::string label = {}) {
  MethodSpec m;
  m.id = std::move(id);
  m.kind = MethodKind::Ols;
  m.adjustment = std::move(adjustment);
  m.expect_unbiased = expect_unbiased;
  m.claimed_biased = std::move(claimed_biased);
  m.bias_threshold = bias_threshold;
  m.label = std::move(label);
  return m;
}

inline MethodSpec marginal(std::string id, MethodKind kind) {
  MethodSpec m;
  m.id = std::move(id);
  m.kind = kind;
  m.truth = TruthSource::Marginal;
  return m;
}

// Shared pieces of the three-period designs.
inline std::vector<GaussianTerm> treatment_terms_of_mu() {
  return {{{"X1"}, 2}, {{"X2"}, 5}, {{"X3"}, 6}, {{"X1", "X2"}, 1}, {{"X1", "X3"}, 1}, {{"X2", "X3"}, 1}};
}

inline CoefficientMap three_period_reference(double intercept) {
  return {{"Intercept", intercept}, {"X1", 2}, {"X2", 5}, {"X3", 6},
          {"X1*X2", 1},             {"X1*X3", 1}, {"X2*X3", 1}, {"X1*X2*X3", 0}};
}

inline ScenarioSpec single_posttest() {
  ScenarioSpec s;
  s.id = "single-posttest";
  s.anchor = "Simulation Result for a design with a single intervention";
  auto dag = build_dag({node("W1", Role::ObservedConfounder), node("U1", Role::UnobservedConfounder),
                        node("U2", Role::UnobservedConfounder), node("X", Role::Treatment),
                        node("O1", Role::Outcome)},
                       {{"W1", "X"}, {"U1", "X"}, {"U2", "X"}, {"W1", "O1"}, {"U1", "O1"}, {"U2", "O1"}, {"X", "O1"}});
  s.model = build_scm(std::move(dag),
                      {{"W1", bern(0.8)},
                       {"U1", bern(0.4)},
                       {"U2", bern(0.6)},
                       {"X", bern(0.30, {{"U1", 0.2}, {"U2", 0.5}, {"W1", -0.3}})},
                       {"O1", gauss(5, {{{"X"}, 7}, {{"W1"}, 4}, {{"U1"}, -2}, {{"U2"}, -2}}, 0.6)}});
  s.observed = {"W1", "X", "O1"};
  s.treatments = {"X"};
  s.confounders = {{"W1"}};
  s.outcome = "O1";
  s.weights = history_weight_model(s.treatments, s.confounders);
  s.reference_truth = {{"Intercept", 5}, {"X", 7}};
  auto none = ols("ols-none", {}, false, {"X"}, 0.3, "Control for No Confounders");
  auto w1 = ols("ols-W1", {"W1"}, false, {"X"}, 0.3, "Control for W1");
  auto w1u1 = ols("ols-W1-U1", {"W1", "U1"}, false, {"X"}, 0.3, "Control for W1 and U1");
  auto full = ols("ols-W1-U1-U2", {"W1", "U1", "U2"}, true, {}, 0.3, "Control for W1, U1 and U2");
  w1u1.uses_unobserved = full.uses_unobserved = true;
  auto observed_only = w1;
  observed_only.id = "ols";
  s.methods = {none, w1, w1u1, full, observed_only};
  s.default_methods = {"ols-none", "ols-W1", "ols-W1-U1", "ols-W1-U1-U2"};
  return s;
}

inline CausalDag three_period_dag(bool unobserved) {
  std::vector<NodeSpec> nodes{node("L1", Role::ObservedConfounder), node("L2", Role::ObservedConfounder),
                              node("L3", Role::ObservedConfounder), node("X1", Role::Treatment),
                              node("X2", Role::Treatment),          node("X3", Role::Treatment),
                              node("O", Role::Outcome)};
  std::vector<Edge> edges{{"L1", "X1"}, {"L1", "L2"}, {"X1", "X2"}, {"L2", "X2"}, {"L2", "L3"},
                          {"X2", "X3"}, {"L3", "X3"}, {"X1", "O"},  {"X2", "O"},  {"X3", "O"},
                          {"L1", "O"},  {"L2", "O"},  {"L3", "O"}};
  if (unobserved) {
    for (const char* u : {"U1", "U2", "U3"}) nodes.push_back(node(u, Role::UnobservedConfounder));
    for (Edge e : std::vector<Edge>{{"U1", "U2"}, {"U2", "U3"}, {"U1", "L1"}, {"U1", "X1"}, {"U2", "L2"},
                                    {"U2", "X2"}, {"U3", "L3"}, {"U3", "X3"}, {"U1", "O"}, {"U2", "O"},
                                    {"U3", "O"}}) {
      edges.push_back(e);
    }
  }
  return build_dag(nodes, edges);
}

inline ScenarioSpec tv_no_unmeasured() {
  ScenarioSpec s;
  s.id = "tv-no-unmeasured";
  s.anchor = "Simulation Result for Time-Varying Treatments, Confounders with No Unmeasured Confounders";
  auto mu = treatment_terms_of_mu();
  mu.push_back({{"L1"}, 4});
  mu.push_back({{"L2"}, 4});
  mu.push_back({{"L3"}, 3});
  s.model = build_scm(three_period_dag(false),
                      {{"L1", bern(0.5)},
                       {"X1", bern(0.2, {{"L1", 0.4}})},
                       {"L2", bern(0.2, {{"L1", 0.6}})},
                       {"X2", bern(0.3, {{"X1", 0.5}, {"L2", 0.2}})},
                       {"L3", bern(0.3, {{"L2", 0.5}})},
                       {"X3", bern(0.3, {{"X2", 0.4}, {"L3", 0.1}})},
                       {"O", gauss(0.2, mu, 0.2)}});
  s.observed = {"L1", "X1", "L2", "X2", "L3", "X3", "O"};
  s.treatments = {"X1", "X2", "X3"};
  s.confounders = {{"L1"}, {"L2"}, {"L3"}};
  s.outcome = "O";
  s.weights = history_weight_model(s.treatments, s.confounders);
  s.reference_truth = three_period_reference(0.2);
  s.methods = {ols("ols", {"L1", "L2", "L3"}, true), marginal("msm-iptw", MethodKind::MsmIptw),
               marginal("g-formula", MethodKind::GFormula)};
  s.default_methods = {"ols"};
  return s;
}

inline ScenarioSpec tv_unmeasured_variant(std::string id, double u1, double u2, double u3, bool biased,
                                          std::string anchor) {
  ScenarioSpec s;
  s.id = std::move(id);
  s.anchor = std::move(anchor);
  auto mu = treatment_terms_of_mu();
  for (auto t : std::vector<GaussianTerm>{{{"L1"}, 4}, {{"L2"}, 4}, {{"L3"}, 3}, {{"U1"}, u1}, {{"U2"}, u2}, {{"U3"}, u3}}) {
    mu.push_back(t);
  }
  s.model = build_scm(three_period_dag(true),
                      {{"U1", bern(0.6)},
                       {"U2", bern(0.6, {{"U1", 0.3}})},
                       {"U3", bern(0.4, {{"U2", 0.3}})},
                       {"L1", bern(0.5, {{"U1", 0.4}})},
                       {"X1", bern(0.2, {{"L1", 0.4}, {"U1", 0.3}})},
                       {"L2", bern(0.2, {{"L1", 0.6}, {"U2", 0.1}})},
                       {"X2", bern(0.3, {{"X1", 0.2}, {"L2", 0.2}, {"U2", 0.2}})},
                       {"L3", bern(0.3, {{"L2", 0.5}, {"U3", 0.1}})},
                       {"X3", bern(0.1, {{"X2", 0.4}, {"L3", 0.2}, {"U3", 0.2}})},
                       {"O", gauss(0.2, mu, 0.2)}});
  s.observed = {"L1", "X1", "L2", "X2", "L3", "X3", "O"};
  s.treatments = {"X1", "X2", "X3"};
  s.confounders = {{"L1"}, {"L2"}, {"L3"}};
  s.outcome = "O";
  s.weights = history_weight_model(s.treatments, s.confounders);
  s.reference_truth = three_period_reference(0.2);
  if (biased) {
    s.methods = {ols("ols", {"L1", "L2", "L3"}, false, {"Intercept", "X1", "X2", "X3"}, 0.5)};
  } else {
    s.methods = {ols("ols", {"L1", "L2", "L3"}, true)};
  }
  s.default_methods = {"ols"};
  return s;
}

inline ScenarioSpec tv_feedback() {
  ScenarioSpec s;
  s.id = "tv-feedback";
  s.anchor = "Simulation Results for Time Varying Treatments and Confounders Feedback: "
             "Comparison of Outcome Regression, MSM and G-formula";
  auto dag = build_dag({node("X1", Role::Treatment), node("L2", Role::ObservedConfounder), node("X2", Role::Treatment),
                        node("L3", Role::ObservedConfounder), node("X3", Role::Treatment), node("O", Role::Outcome)},
                       {{"X1", "L2"}, {"X1", "X2"}, {"L2", "X2"}, {"L2", "L3"}, {"X2", "L3"}, {"L3", "X3"},
                        {"X2", "X3"}, {"X1", "O"}, {"X2", "O"}, {"X3", "O"}, {"L2", "O"}, {"L3", "O"}});
  // X1 is randomized; L_t is measured just before X_t.
  s.model = build_scm(std::move(dag),
                      {{"X1", bern(0.6)},
                       {"L2", bern(0.1, {{"X1", 0.6}})},
                       {"X2", bern(0.3, {{"L2", 0.7}, {"X1", -0.25}})},
                       {"L3", bern(0.2, {{"L2", 0.3}, {"X2", 0.3}})},
                       {"X3", bern(0.1, {{"L3", 0.3}, {"X2", 0.1}})},
                       {"O", gauss(5,
                                   {{{"X1"}, 4}, {{"X2"}, 5}, {{"X3"}, 6}, {{"X1", "X2"}, 10}, {{"X1", "X3"}, 11},
                                    {{"X2", "X3"}, 12}, {{"L2"}, -8}, {{"L3"}, -9}},
                                   0.2)}});
  s.observed = {"X1", "L2", "X2", "L3", "X3", "O"};
  s.treatments = {"X1", "X2", "X3"};
  s.confounders = {{}, {"L2"}, {"L3"}};
  s.outcome = "O";
  // SW = P(X2) P(X3) / (P(X2 | X1, L2) P(X3 | X2, L3))
  s.weights = {{"X2", {"X1", "L2"}, {}}, {"X3", {"X2", "L3"}, {}}};
  s.reference_truth = {{"Intercept", 2.13}, {"X1", -2.42}, {"X2", 2.3},  {"X3", 6},
                       {"X1*X2", 10},       {"X1*X3", 11},  {"X2*X3", 12}, {"X1*X2*X3", 0}};
  s.methods = {ols("ols", {"L2", "L3"}, false, {"Intercept", "X1", "X2"}, 1.0),
               marginal("msm-iptw", MethodKind::MsmIptw), marginal("g-formula", MethodKind::GFormula)};
  s.default_methods = {"ols", "msm-iptw", "g-formula"};
  return s;
}

}  // namespace scenario_detail

/// The simulation studies, in the order they are tabulated.
inline std::vector<ScenarioSpec> catalog() {
  using namespace scenario_detail;
  std::vector<ScenarioSpec> out{
      single_posttest(),
      tv_no_unmeasured(),
      tv_unmeasured_variant("tv-unmeasured", 2, 3, 1, true,
                            "Simulation Result for Time-Varying Treatments, Confounders with Unmeasured Confounders"),
      tv_unmeasured_variant("tv-unmeasured-case1", 0.1, 0.2, 0.3, false,
                            "Simulation Result for Time-Varying Treatments, Confounders with Unmeasured Confounders "
                            "(Comparison of Case I and II): Case I"),
      tv_unmeasured_variant("tv-unmeasured-case2", 8, 9, 10, true,
                            "Simulation Result for Time-Varying Treatments, Confounders with Unmeasured Confounders "
                            "(Comparison of Case I and II): Case II"),
      tv_feedback(),
  };
  for (auto& s : out) {
    s.marginal_truth = true_msm_coefficients(s.model, s.treatments, s.outcome).coefficients;
  }
  return out;
}

inline ScenarioSpec find_scenario(const std::string& id) {
  for (auto& s : catalog()) {
    if (s.id == id) return s;
  }
  throw Error(Errc::UnknownScenario, "'" + id + "'");
}

enum class Verdict { MatchesTruth, BiasedAsClaimed, Mismatch };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::MatchesTruth: return "matches-truth";
    case Verdict::BiasedAsClaimed: return "biased-as-paper-claims";
    case Verdict::Mismatch: return "mismatch";
  }
  return "mismatch";
}

struct ReproductionRow {
  std::string method;
  std::string term;
  double truth = 0;
  double estimate = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
  std::optional<Interval> ci;
  Verdict verdict = Verdict::Mismatch;
  std::string note;
};

struct ReproduceOptions {
  std::size_t n = 500;
  std::uint64_t seed = 1;
  std::size_t bootstrap = 0;  // 0 = no intervals
  double level = 0.95;
  double tolerance = 0.3;       // unbiased terms: |est - truth| <= max(tolerance, k * se)
  double se_multiplier = 3.0;
};

/// Verdict for one term. Claimed-biased terms must be off by more than the
/// method's threshold; the rest must sit within tolerance (for methods the
/// study calls unbiased) or are counted as part of the claimed bias.
inline Verdict judge(const MethodSpec& m, const std::string& term, double truth, double estimate, double se,
                     const ReproduceOptions& opt) {
  if (!std::isfinite(estimate)) return Verdict::Mismatch;
  const double dev = std::abs(estimate - truth);
  if (m.claimed_biased.count(term)) return dev > m.bias_threshold ? Verdict::BiasedAsClaimed : Verdict::Mismatch;
  const double tol = std::max(opt.tolerance, std::isfinite(se) ? opt.se_multiplier * se : 0.0);
  if (dev <= tol) return Verdict::MatchesTruth;
  return m.expect_unbiased ? Verdict::Mismatch : Verdict::BiasedAsClaimed;
}

/// Fits one method on already-simulated data (mask applied by the caller
/// unless the method deliberately uses unobserved columns).
inline CoefficientReport run_method(const ScenarioSpec& s, const MethodSpec& m, const Dataset& data,
                                    std::size_t bootstrap, double level, std::uint64_t seed) {
  const auto terms = s.treatment_terms();
  Estimator est;
  switch (m.kind) {
    case MethodKind::Ols: {
      auto all = terms;
      for (const auto& a : m.adjustment) all.push_back({a});
      est = [&s, all](const Dataset& d) { return fit_ols(d, s.outcome, all); };
      break;
    }
    case MethodKind::MsmIptw:
      est = [&s, terms](const Dataset& d) { return fit_msm(d, iptw_weights(d, s.weights), s.outcome, terms); };
      break;
    case MethodKind::GFormula:
      est = [&s](const Dataset& d) { return g_formula_report(d, s.treatments, s.confounders, s.outcome); };
      break;
  }
  return bootstrap > 0 ? bootstrap_ci(data, est, bootstrap, level, seed) : est(data);
}

inline std::vector<ReproductionRow> reproduce(const ScenarioSpec& s, const std::vector<std::string>& methods,
                                              const ReproduceOptions& opt) {
  std::vector<const MethodSpec*> chosen;
  for (const auto& id : methods.empty() ? s.default_methods : methods) chosen.push_back(&s.method(id));
  const Dataset full = simulate(s.model, opt.n, opt.seed);
  const Dataset masked = full.select(s.observed);
  std::vector<ReproductionRow> rows;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    const auto& m = *chosen[k];
    const auto& truth = s.truth_for(m);
    std::optional<CoefficientReport> rep;
    std::string failure;
    try {
      rep = run_method(s, m, m.uses_unobserved ? full : masked, opt.bootstrap, opt.level,
                       noise::derive_seed(opt.seed, k + 1));
    } catch (const Error& e) {
      failure = e.what();
    }
    for (const auto& [term, value] : truth) {
      ReproductionRow row;
      row.method = m.id;
      row.term = term;
      row.truth = value;
      if (rep) {
        const auto& t = rep->term(term);
        row.estimate = t.estimate;
        row.se = t.bootstrap_se ? *t.bootstrap_se : t.se;
        row.ci = t.ci;
      } else {
        row.note = failure;
      }
      row.verdict = judge(m, term, value, row.estimate, row.se, opt);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace causalkit
