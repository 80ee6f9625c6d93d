#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "causalkit/scenarios.hpp"
#include "causalkit/scm.hpp"
#include "causalkit/scm_io.hpp"

using namespace causalkit;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::InvalidArgument;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

StructuralModel posttest() { return find_scenario("single-posttest").model; }
StructuralModel feedback() { return find_scenario("tv-feedback").model; }

// Pre-intervention graph X <- Y -> Z, X -> Z with Gaussian Z.
StructuralModel fork_model() {
  auto dag = build_dag({{"X"}, {"Y"}, {"Z"}}, {{"Y", "X"}, {"X", "Z"}, {"Y", "Z"}});
  return build_scm(dag, {{"Y", BernoulliLinear{0.5, {}}},
                         {"X", BernoulliLinear{0.2, {{"Y", 0.6}}}},
                         {"Z", GaussianLinear{1.0, {{{"X"}, 2.0}, {{"Y"}, 3.0}, {{"X", "Y"}, 0.5}}, 1.0}}});
}

}  // namespace

TEST(BuildScm, SinglePosttestHasZeroProbabilityStratum) {
  const auto m = posttest();
  bool flagged = false;
  for (const auto& w : m.warnings()) flagged |= w.find("P(X=1 | U1=0,U2=0,W1=1) = 0") != std::string::npos;
  EXPECT_TRUE(flagged);
}

TEST(BuildScm, FeedbackModelHasCertainStratum) {
  const auto m = feedback();
  bool flagged = false;
  for (const auto& w : m.warnings()) flagged |= w.find("P(X2=1 | L2=1,X1=0) = 1") != std::string::npos;
  EXPECT_TRUE(flagged) << m.warnings().size();
}

TEST(BuildScm, RejectsInvalidEquations) {
  const auto one = build_dag({{"A"}, {"B"}}, {{"A", "B"}});
  try {
    build_scm(one, {{"A", BernoulliLinear{0.5, {}}}, {"B", BernoulliLinear{0.5, {{"A", 0.7}}}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ProbabilityOutOfRange);
    EXPECT_NE(std::string(e.what()).find("A=1) = 1.2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of([&] { build_scm(one, {{"A", BernoulliLinear{0.5, {}}}}); }), Errc::MissingEquation);
  EXPECT_EQ(code_of([&] { build_scm(one, {{"A", BernoulliLinear{0.5, {}}}, {"B", BernoulliLinear{0.5, {}}}}); }),
            Errc::ParentMismatch);
  EXPECT_EQ(code_of([&] {
              build_scm(one, {{"A", BernoulliLinear{0.5, {}}}, {"B", GaussianLinear{0, {{{"A"}, 1}}, 0.0}}});
            }),
            Errc::NonPositiveSigma);
  EXPECT_EQ(code_of([&] {
              build_scm(one, {{"A", BernoulliLinear{0.5, {}}}, {"B", GaussianLinear{0, {{{"Q"}, 1}}, 1.0}}});
            }),
            Errc::ParentMismatch);
}

TEST(Simulate, MatchesMarginalsAndConditionals) {
  const auto d = simulate(posttest(), 100000, 3);
  EXPECT_NEAR(mean(d.values("W1")), 0.8, 0.01);
  EXPECT_EQ(d.names(), (std::vector<std::string>{"U1", "U2", "W1", "X", "O1"}));

  const auto tv = simulate(find_scenario("tv-no-unmeasured").model, 200000, 5);
  const auto& l1 = tv.values("L1");
  const auto& x1 = tv.values("X1");
  double n1 = 0, t1 = 0;
  for (std::size_t i = 0; i < tv.rows(); ++i) {
    if (l1[i] == 1) {
      ++n1;
      t1 += x1[i];
    }
  }
  EXPECT_NEAR(t1 / n1, 0.6, 0.01);
}

TEST(Simulate, SingleDrawStaysInSupport) {
  const auto d = simulate(posttest(), 1, 99);
  ASSERT_EQ(d.rows(), 1u);
  for (const auto& c : d.columns()) {
    if (c.kind == ColumnKind::Binary) EXPECT_TRUE(c.values[0] == 0 || c.values[0] == 1);
    EXPECT_TRUE(std::isfinite(c.values[0]));
  }
  EXPECT_EQ(code_of([] { simulate(posttest(), 0, 1); }), Errc::InvalidArgument);
}

TEST(Simulate, ReproducibleAndPartitionIndependent) {
  const auto m = feedback();
  const auto a = simulate(m, 2000, 42);
  const auto b = simulate(m, 2000, 42);
  std::ostringstream sa, sb;
  write_csv(sa, a);
  write_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  // unit i depends only on (seed, i): evaluating units out of order agrees
  std::vector<double> unit;
  for (std::size_t i : {1999u, 0u, 1234u}) {
    m.draw_unit(42, i, unit);
    for (std::size_t k = 0; k < m.order().size(); ++k) EXPECT_EQ(unit[k], a.values(m.order()[k])[i]);
  }
  EXPECT_NE(sa.str(), [&] {
    std::ostringstream s;
    write_csv(s, simulate(m, 2000, 43));
    return s.str();
  }());
}

TEST(Simulate, PreservesConditionalLawsInEveryStratum) {
  for (const auto& s : catalog()) {
    const auto d = simulate(s.model, 100000, 17);
    for (const auto& node : s.model.order()) {
      const auto* eq = std::get_if<BernoulliLinear>(&s.model.equation(node));
      if (!eq) continue;
      std::vector<std::string> parents;
      for (const auto& [p, _] : eq->coefficients) parents.push_back(p);
      const auto cols = binary_columns(d, parents);
      std::map<std::uint64_t, std::pair<double, double>> cnt;
      for (std::size_t i = 0; i < d.rows(); ++i) {
        auto& c = cnt[stratum_key(cols, i)];
        c.first += 1;
        c.second += d.values(node)[i];
      }
      for (const auto& [key, c] : cnt) {
        if (c.first < 1000) continue;
        double p = eq->intercept;
        std::size_t j = 0;
        for (const auto& [_, coef] : eq->coefficients) p += ((key >> j++) & 1u) ? coef : 0.0;
        EXPECT_LE(std::abs(c.second / c.first - p), 4 * std::sqrt(p * (1 - p) / c.first) + 1e-6)
            << s.id << " " << node << " stratum " << key;
      }
    }
  }
}

TEST(ApplyIntervention, ReplacesEquationAndCutsEdges) {
  const auto pre = fork_model();
  const auto post = apply_intervention(pre, {{"X", 1}});
  EXPECT_TRUE(post.dag().parents("X").empty());
  EXPECT_TRUE(post.dag().has_edge("X", "Z"));
  EXPECT_TRUE(post.dag().has_edge("Y", "Z"));
  EXPECT_TRUE(std::holds_alternative<Constant>(post.equation("X")));
  // Z keeps its own equation, now fed the constant X = 1
  const auto d = simulate(post, 50000, 4);
  EXPECT_NEAR(mean(d.values("Z")), 1.0 + 2.0 + 3.0 * 0.5 + 0.5 * 0.5, 0.03);

  const auto same = apply_intervention(pre, {});
  EXPECT_EQ(same.dag(), pre.dag());
  EXPECT_EQ(code_of([&] { apply_intervention(pre, {{"Q", 1}}); }), Errc::UnknownNode);
  EXPECT_EQ(code_of([&] { apply_intervention(pre, {{"X", 0.5}}); }), Errc::ValueOutOfSupport);
}

TEST(ApplyIntervention, FeedbackJointRegimeMean) {
  const auto post = apply_intervention(feedback(), {{"X1", 1}, {"X2", 1}, {"X3", 1}});
  EXPECT_NEAR(mean(simulate(post, 200000, 8).values("O")), 41.01, 0.15);
}

TEST(ApplyIntervention, NonDescendantsKeepTheirDistribution) {
  const auto m = find_scenario("tv-no-unmeasured").model;
  const auto post = apply_intervention(m, {{"X2", 1}});
  const auto a = simulate(m, 100000, 1);
  const auto b = simulate(post, 100000, 2);
  for (const char* node : {"L1", "X1", "L2", "L3"}) {
    const double pa = mean(a.values(node)), pb = mean(b.values(node));
    EXPECT_NEAR(pa, pb, 4 * std::sqrt(2 * pa * (1 - pa) / 100000)) << node;
  }
  EXPECT_GT(mean(b.values("X3")) - mean(a.values("X3")), 0.1);
}

TEST(PotentialOutcomes, NullEffectGivesIdenticalColumns) {
  auto dag = build_dag({{"X"}, {"Y"}}, {});
  const auto m = build_scm(dag, {{"X", BernoulliLinear{0.5, {}}}, {"Y", GaussianLinear{1, {}, 1}}});
  const auto po = potential_outcomes(m, {"X"}, "Y", 500, 3);
  EXPECT_EQ(po.regime_outcomes[0], po.regime_outcomes[1]);
}

TEST(PotentialOutcomes, ConsistencyHoldsForEveryUnit) {
  for (const auto& s : catalog()) {
    const auto po = potential_outcomes(s.model, s.treatments, s.outcome, 2000, 21);
    for (std::size_t i = 0; i < po.units(); ++i) {
      ASSERT_EQ(po.factual_outcome[i], po.regime_outcomes[po.factual_regime[i]][i]) << s.id << " unit " << i;
    }
  }
}

TEST(PotentialOutcomes, SinglePosttestEffectIsSeven) {
  const auto po = potential_outcomes(posttest(), {"X"}, "O1", 200000, 12);
  double d = 0;
  for (std::size_t i = 0; i < po.units(); ++i) d += po.regime_outcomes[1][i] - po.regime_outcomes[0][i];
  EXPECT_NEAR(d / static_cast<double>(po.units()), 7.0, 0.1);
}

TEST(PotentialOutcomes, RegimeCap) {
  EXPECT_EQ(code_of([] { potential_outcomes(feedback(), {"X1", "X2", "X3"}, "O", 10, 1, 4); }),
            Errc::RegimeExplosion);
}

TEST(TrueMsm, FeedbackMatchesReferenceCoefficients) {
  const auto truth = true_msm_coefficients(feedback(), {"X1", "X2", "X3"}, "O");
  EXPECT_TRUE(truth.analytic);
  const CoefficientMap expected{{"Intercept", 2.13}, {"X1", -2.42}, {"X2", 2.3},  {"X3", 6},
                                {"X1*X2", 10},       {"X1*X3", 11},  {"X2*X3", 12}, {"X1*X2*X3", 0}};
  ASSERT_EQ(truth.coefficients.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(truth.coefficients[i].first, expected[i].first);
    EXPECT_NEAR(truth.coefficients[i].second, expected[i].second, 1e-9);
  }
}

TEST(TrueMsm, NoFeedbackShiftsOnlyTheIntercept) {
  const auto m = find_scenario("tv-no-unmeasured").model;
  const auto analytic = true_msm_coefficients(m, {"X1", "X2", "X3"}, "O");
  MsmTruthOptions mc;
  mc.force_monte_carlo = true;
  const auto sampled = true_msm_coefficients(m, {"X1", "X2", "X3"}, "O", mc);
  EXPECT_FALSE(sampled.analytic);
  const std::vector<double> mu{2, 5, 6, 1, 1, 1, 0};
  for (std::size_t i = 1; i < analytic.coefficients.size(); ++i) {
    EXPECT_NEAR(analytic.coefficients[i].second, mu[i - 1], 1e-9);
    EXPECT_NEAR(sampled.coefficients[i].second, mu[i - 1], 0.05);
  }
  // 0.2 + 4 E[L1] + 4 E[L2] + 3 E[L3] = 0.2 + 2 + 2 + 1.65
  EXPECT_NEAR(analytic.coefficients[0].second, 5.85, 1e-9);
  EXPECT_NEAR(sampled.coefficients[0].second, 5.85, 0.05);
}

TEST(TrueMsm, NullOutcomeHasOnlyAnIntercept) {
  auto dag = build_dag({{"X1"}, {"X2"}, {"Y"}}, {{"X1", "X2"}});
  const auto m = build_scm(dag, {{"X1", BernoulliLinear{0.5, {}}},
                                 {"X2", BernoulliLinear{0.2, {{"X1", 0.3}}}},
                                 {"Y", GaussianLinear{3, {}, 1}}});
  const auto t = true_msm_coefficients(m, {"X1", "X2"}, "Y");
  EXPECT_NEAR(t.coefficients[0].second, 3, 1e-12);
  for (std::size_t i = 1; i < t.coefficients.size(); ++i) EXPECT_EQ(t.coefficients[i].second, 0);
}

TEST(TrueMsm, ConfounderProductsFallBackToMonteCarlo) {
  auto dag = build_dag({{"L"}, {"M"}, {"X"}, {"Y"}}, {{"L", "M"}, {"L", "X"}, {"L", "Y"}, {"M", "Y"}, {"X", "Y"}});
  const auto m = build_scm(dag, {{"L", BernoulliLinear{0.5, {}}},
                                 {"M", BernoulliLinear{0.2, {{"L", 0.6}}}},
                                 {"X", BernoulliLinear{0.3, {{"L", 0.4}}}},
                                 {"Y", GaussianLinear{0, {{{"X"}, 1}, {{"L", "M"}, 2}}, 1}}});
  MsmTruthOptions opt;
  opt.monte_carlo_n = 200000;
  const auto t = true_msm_coefficients(m, {"X"}, "Y", opt);
  EXPECT_FALSE(t.analytic);
  // E[L M] = P(L=1) P(M=1 | L=1) = 0.5 * 0.8
  EXPECT_NEAR(t.coefficients[0].second, 0.8, 0.02);
  EXPECT_NEAR(t.coefficients[1].second, 1.0, 1e-9);  // common random numbers cancel
  opt.allow_monte_carlo = false;
  EXPECT_EQ(code_of([&] { true_msm_coefficients(m, {"X"}, "Y", opt); }), Errc::UnsupportedEquationForm);
}

TEST(TrueMsm, AnalyticAgreesWithMonteCarloOnEveryScenario) {
  MsmTruthOptions mc;
  mc.force_monte_carlo = true;
  mc.monte_carlo_n = 300000;
  for (const auto& s : catalog()) {
    const auto a = true_msm_coefficients(s.model, s.treatments, s.outcome);
    const auto b = true_msm_coefficients(s.model, s.treatments, s.outcome, mc);
    ASSERT_TRUE(a.analytic) << s.id;
    for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
      EXPECT_NEAR(a.coefficients[i].second, b.coefficients[i].second, 0.05) << s.id << " " << a.coefficients[i].first;
    }
  }
}

TEST(ScmIo, JsonRoundTripPreservesSimulation) {
  const auto m = feedback();
  const auto back = scm_from_json(scm_to_json(m));
  std::ostringstream a, b;
  write_csv(a, simulate(m, 300, 9));
  write_csv(b, simulate(back, 300, 9));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(code_of([] {
              scm_from_json(nlohmann::json::parse(
                  R"({"dag":{"nodes":[{"id":"A"}],"edges":[]},"equations":{"A":{"kind":"poisson"}}})"));
            }),
            Errc::ParseError);
}

TEST(DatasetCsv, RoundTripKeepsKindsAndValues) {
  const auto d = simulate(posttest(), 50, 2);
  std::ostringstream os;
  write_csv(os, d);
  std::istringstream is(os.str());
  const auto back = read_csv(is);
  EXPECT_EQ(back.names(), d.names());
  EXPECT_EQ(back.column("X").kind, ColumnKind::Binary);
  EXPECT_EQ(back.values("O1"), d.values("O1"));
}
