#include <gtest/gtest.h>

#include <random>

#include "causalkit/dag.hpp"
#include "causalkit/dag_io.hpp"
#include "oracles.hpp"

using namespace causalkit;

namespace {

CausalDag fig3() {
  return build_dag({{"X", Role::Treatment}, {"Y", Role::Outcome}, {"Z", Role::ObservedConfounder}},
                   {{"Z", "X"}, {"Z", "Y"}, {"X", "Y"}});
}

CausalDag chain_dag() { return build_dag({{"A"}, {"B"}, {"C"}}, {{"A", "B"}, {"B", "C"}}); }
CausalDag fork_dag() { return build_dag({{"A"}, {"B"}, {"C"}}, {{"B", "A"}, {"B", "C"}}); }
CausalDag collider_dag() { return build_dag({{"A"}, {"B"}, {"C"}, {"D"}}, {{"A", "B"}, {"C", "B"}, {"B", "D"}}); }

CausalDag three_period(bool feedback) {
  std::vector<Edge> edges{{"L1", "X1"}, {"L1", "L2"}, {"X1", "X2"}, {"L2", "X2"}, {"L2", "L3"}, {"X2", "X3"},
                          {"L3", "X3"}, {"X1", "O"},  {"X2", "O"},  {"X3", "O"},  {"L1", "O"},  {"L2", "O"},
                          {"L3", "O"}};
  if (feedback) {
    edges.push_back({"X1", "L2"});
    edges.push_back({"X2", "L3"});
  }
  return build_dag({{"L1"}, {"L2"}, {"L3"}, {"X1"}, {"X2"}, {"X3"}, {"O"}}, edges);
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::InvalidArgument;
}

}  // namespace

TEST(BuildDag, AcceptsTreatmentOutcomeConfounderTriangle) {
  const auto g = fig3();
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.topological_order(), (std::vector<std::string>{"Z", "X", "Y"}));
  EXPECT_EQ(g.role("Z"), Role::ObservedConfounder);
}

TEST(BuildDag, EmptyGraphIsValid) {
  const auto g = build_dag({}, {});
  EXPECT_EQ(g.node_count(), 0u);
  EXPECT_TRUE(g.topological_order().empty());
}

TEST(BuildDag, RejectsCyclesAndBadEdges) {
  try {
    build_dag({{"A"}, {"B"}}, {{"A", "B"}, {"B", "A"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CycleDetected);
    EXPECT_NE(std::string(e.what()).find("A -> B -> A"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of([] { build_dag({{"A"}, {"B"}, {"C"}}, {{"A", "B"}, {"B", "C"}, {"C", "A"}}); }),
            Errc::CycleDetected);
  EXPECT_EQ(code_of([] { build_dag({{"A"}}, {{"A", "A"}}); }), Errc::CycleDetected);
  EXPECT_EQ(code_of([] { build_dag({{"A"}}, {{"A", "Q"}}); }), Errc::UnknownEndpoint);
  EXPECT_EQ(code_of([] { build_dag({{"A"}, {"B"}}, {{"A", "B"}, {"A", "B"}}); }), Errc::DuplicateEdge);
}

TEST(DSeparation, ChainForkCollider) {
  EXPECT_TRUE(d_separated(chain_dag(), "A", "C", {"B"}));
  EXPECT_FALSE(d_separated(chain_dag(), "A", "C", {}));
  EXPECT_TRUE(d_separated(fork_dag(), "A", "C", {"B"}));
  EXPECT_FALSE(d_separated(fork_dag(), "A", "C", {}));
  EXPECT_TRUE(d_separated(collider_dag(), "A", "C", {}));
  EXPECT_FALSE(d_separated(collider_dag(), "A", "C", {"B"}));
  // conditioning on a collider's descendant also opens it
  EXPECT_FALSE(d_separated(collider_dag(), "A", "C", {"D"}));
}

TEST(DSeparation, ErrorsOnBadQueries) {
  EXPECT_EQ(code_of([] { d_separated(chain_dag(), "A", "Q", {}); }), Errc::UnknownNode);
  EXPECT_EQ(code_of([] { d_separated(chain_dag(), "A", "C", {"A"}); }), Errc::OverlapError);
  EXPECT_EQ(code_of([] { d_separated(chain_dag(), "A", "C", {"Q"}); }), Errc::UnknownNode);
}

TEST(DSeparation, OpenPathsListCollider) {
  const auto open = open_paths(collider_dag(), "A", "C", {"B"});
  ASSERT_EQ(open.size(), 1u);
  EXPECT_EQ(open[0].to_string(), "A -> B <- C");
  EXPECT_EQ(open[0].triples, std::vector<Triple>{Triple::Collider});
}

TEST(DSeparation, AgreesWithEnumerationOracleAndIsSymmetric) {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const int k = 3 + rep % 3;
    const auto dag = oracle::random_dag(rng, k, 0.5);
    const auto joint = oracle::random_joint(rng, dag);
    const auto names = dag.nodes();
    for (int x = 0; x < k; ++x) {
      for (int y = x + 1; y < k; ++y) {
        for (std::uint32_t zm = 0; zm < (1u << k); ++zm) {
          if (zm & ((1u << x) | (1u << y))) continue;
          NodeSet given;
          std::vector<int> zi;
          for (int b = 0; b < k; ++b) {
            if (zm & (1u << b)) {
              given.insert(names[static_cast<std::size_t>(b)]);
              zi.push_back(joint.index_of(names[static_cast<std::size_t>(b)]));
            }
          }
          const auto& nx = names[static_cast<std::size_t>(x)];
          const auto& ny = names[static_cast<std::size_t>(y)];
          const bool sep = d_separated(dag, nx, ny, given);
          EXPECT_EQ(sep, d_separated(dag, ny, nx, given));
          EXPECT_EQ(sep, open_paths(dag, nx, ny, given).empty());
          EXPECT_EQ(sep, oracle::independent(joint, joint.index_of(nx), joint.index_of(ny), zi))
              << nx << " vs " << ny << " given " << zm;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(BackdoorPaths, TriangleHasOnePath) {
  const auto paths = backdoor_paths(fig3(), "X", "Y");
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].to_string(), "X <- Z -> Y");
  EXPECT_EQ(paths[0].triples, std::vector<Triple>{Triple::Fork});
  EXPECT_TRUE(paths[0].is_backdoor());
}

TEST(BackdoorPaths, ThreePeriodDesignIncludesBaselineConfounderPath) {
  const auto g = three_period(false);
  const auto paths = backdoor_paths(g, "X1", "O");
  bool found = false;
  for (const auto& p : paths) {
    EXPECT_TRUE(p.is_backdoor());
    const NodeSet unique(p.nodes.begin(), p.nodes.end());
    EXPECT_EQ(unique.size(), p.nodes.size());
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
      EXPECT_TRUE(g.has_edge(p.nodes[i], p.nodes[i + 1]) || g.has_edge(p.nodes[i + 1], p.nodes[i]));
    }
    found |= p.to_string() == "X1 <- L1 -> O";
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(std::is_sorted(paths.begin(), paths.end()));
}

TEST(BackdoorPaths, NoIncomingEdgeMeansNoBackdoor) {
  const auto g = build_dag({{"X"}, {"Y"}}, {{"X", "Y"}});
  EXPECT_TRUE(backdoor_paths(g, "X", "Y").empty());
  EXPECT_EQ(code_of([&] { backdoor_paths(g, "X", "Q"); }), Errc::UnknownNode);
}

TEST(AdjustmentSet, BackdoorCriterion) {
  EXPECT_TRUE(is_valid_adjustment_set(fig3(), "X", "Y", {"Z"}));
  EXPECT_FALSE(is_valid_adjustment_set(fig3(), "X", "Y", {}));
  // L2 lies on the causal path X1 -> L2 -> O in the feedback design
  EXPECT_FALSE(is_valid_adjustment_set(three_period(true), "X1", "O", {"L2"}));
  EXPECT_TRUE(is_valid_adjustment_set(three_period(false), "X1", "O", {"L1"}));
  EXPECT_EQ(code_of([] { is_valid_adjustment_set(fig3(), "X", "Y", {"Q"}); }), Errc::UnknownNode);
}

TEST(Intervene, RemovesIncomingEdgesOnly) {
  const auto pre = build_dag({{"X"}, {"Y"}, {"Z"}}, {{"Y", "X"}, {"X", "Z"}, {"Y", "Z"}});
  const auto post = intervene(pre, {"X"});
  EXPECT_EQ(post.edges(), (std::vector<Edge>{{"X", "Z"}, {"Y", "Z"}}));
  EXPECT_EQ(intervene(pre, {}), pre);
  EXPECT_EQ(intervene(pre, {"X", "Y", "Z"}).edge_count(), 0u);
  EXPECT_EQ(code_of([&] { intervene(pre, {"Q"}); }), Errc::UnknownNode);
}

TEST(Intervene, PropertyInDegreeZeroAndEdgeAccounting) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const auto g = oracle::random_dag(rng, 6, 0.4);
    NodeSet targets;
    for (const auto& n : g.nodes()) {
      if (rng() % 3 == 0) targets.insert(n);
    }
    std::size_t removed = 0;
    for (const auto& t : targets) removed += g.parents(t).size();
    const auto post = intervene(g, targets);
    for (const auto& t : targets) EXPECT_TRUE(post.parents(t).empty());
    EXPECT_EQ(post.edge_count(), g.edge_count() - removed);
  }
}

TEST(DagIo, JsonRoundTripAndDot) {
  const auto g = fig3();
  EXPECT_EQ(dag_from_json(dag_to_json(g)), g);
  const auto dot = dag_to_dot(g, backdoor_paths(g, "X", "Y"));
  EXPECT_NE(dot.find("\"Z\" -> \"X\" [color=red"), std::string::npos) << dot;
  EXPECT_NE(dot.find("\"X\" -> \"Y\";"), std::string::npos) << dot;
  EXPECT_EQ(code_of([] { dag_from_json(nlohmann::json::parse(R"({"nodes":[{"id":"A","role":"wizard"}]})")); }),
            Errc::ParseError);
}
