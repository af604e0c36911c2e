#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qwflow/graph.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace qwflow;

TEST(BuildGraph, SingleVertexGetsSelfLoop) {
  const DirectedGraph g = build_graph(1, {});
  EXPECT_EQ(g.vertex_count(), 1);
  EXPECT_EQ(g.edge_count(), 1);
  EXPECT_TRUE(g.has_edge(0, 0));
}

TEST(BuildGraph, TwoVertexComplete) {
  const DirectedGraph g = build_graph(2, {{0, 1}, {1, 0}});
  EXPECT_EQ(g.edge_count(), 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) EXPECT_TRUE(g.has_edge(a, b));
}

TEST(BuildGraph, ThreeCycleHasSixEdges) {
  const DirectedGraph g = build_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_EQ(g.edge_count(), 6);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_FALSE(g.has_edge(1, 0));
}

TEST(BuildGraph, DuplicatesAndExistingLoopsCollapse) {
  const DirectedGraph g = build_graph(2, {{0, 1}, {0, 1}, {0, 0}});
  EXPECT_EQ(g.edge_count(), 3);  // loops 0,1 plus 0->1
}

TEST(BuildGraph, RejectsOutOfRangeEndpoint) {
  EXPECT_THROW(build_graph(2, {{0, 2}}), IndexError);
  EXPECT_THROW(build_graph(2, {{-1, 0}}), IndexError);
}

TEST(BuildGraph, RejectsNonPositiveVertexCount) {
  EXPECT_THROW(build_graph(0, {}), InvalidArgumentError);
}

TEST(IsReversible, ThreeCycle) {
  EXPECT_TRUE(is_reversible(build_graph(3, {{0, 1}, {1, 2}, {2, 0}})));
}

TEST(IsReversible, OneWayEdgeIsNot) {
  EXPECT_FALSE(is_reversible(build_graph(2, {{0, 1}})));
}

TEST(IsReversible, CompleteTwoVertex) {
  EXPECT_TRUE(is_reversible(build_graph(2, {{0, 1}, {1, 0}})));
}

TEST(IsReversible, MatchesBruteForceReachability) {
  std::mt19937_64 rng(20260801);
  std::uniform_int_distribution<int> size(1, 7);
  std::uniform_real_distribution<double> density(0.05, 0.6);
  int irreversible_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const DirectedGraph g = qwtest::random_graph(size(rng), density(rng), rng);
    const bool brute = qwtest::brute_is_reversible(g);
    EXPECT_EQ(is_reversible(g), brute);
    if (!brute) ++irreversible_seen;
  }
  EXPECT_GT(irreversible_seen, 10);  // the sweep hits both outcomes
}

TEST(ExpandInternal, LineWithTwoStatesPerSite) {
  const DirectedGraph line = build_graph(2, {{0, 1}, {1, 0}});
  const auto [expanded, map] = expand_internal(line, {2, 2});
  EXPECT_EQ(expanded.vertex_count(), 4);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      EXPECT_TRUE(expanded.has_edge(map.flat_index(0, k), map.flat_index(1, l)));
      EXPECT_TRUE(expanded.has_edge(map.flat_index(1, l), map.flat_index(0, k)));
      EXPECT_TRUE(expanded.has_edge(map.flat_index(0, k), map.flat_index(0, l)));
    }
  EXPECT_EQ(expanded.edge_count(), 16);
}

TEST(ExpandInternal, TrivialDimsReproduceTheGraph) {
  const DirectedGraph g = build_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  const auto [expanded, map] = expand_internal(g, {1, 1, 1});
  EXPECT_TRUE(expanded == g);
  EXPECT_EQ(map.flat_index(2, 0), 2);
}

TEST(ExpandInternal, SingleVertexBecomesCompleteGraph) {
  const auto [expanded, map] = expand_internal(build_graph(1, {}), {3});
  EXPECT_EQ(expanded.vertex_count(), 3);
  EXPECT_EQ(expanded.edge_count(), 9);
}

TEST(ExpandInternal, RejectsZeroDim) {
  EXPECT_THROW(expand_internal(build_graph(2, {}), {2, 0}),
               InvalidArgumentError);
}

TEST(ExpandInternal, RejectsDimsLengthMismatch) {
  EXPECT_THROW(expand_internal(build_graph(2, {}), {2}), InvalidArgumentError);
}

TEST(ExpansionMap, RoundTripsIndices) {
  const ExpansionMap map({2, 3, 1});
  EXPECT_EQ(map.expanded_vertex_count(), 6);
  for (int flat = 0; flat < 6; ++flat) {
    const auto [base, k] = map.base_index(flat);
    EXPECT_EQ(map.flat_index(base, k), flat);
  }
  EXPECT_THROW(map.flat_index(0, 2), IndexError);
  EXPECT_THROW(map.base_index(6), IndexError);
}

TEST(AggregateProbability, SumsInternalBlocks) {
  const ExpansionMap map({2, 2});
  Eigen::VectorXd p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  const Eigen::VectorXd base = aggregate_probability(p, map);
  ASSERT_EQ(base.size(), 2);
  EXPECT_DOUBLE_EQ(base[0], 0.3);
  EXPECT_DOUBLE_EQ(base[1], 0.7);
}

TEST(AggregateProbability, IdentityWhenDimsAreOne) {
  const ExpansionMap map({1, 1, 1});
  Eigen::VectorXd p(3);
  p << 0.5, 0.25, 0.25;
  EXPECT_EQ(aggregate_probability(p, map), p);
}

TEST(AggregateProbability, PreservesTheTotal) {
  std::mt19937_64 rng(7);
  const ExpansionMap map({3, 1, 4, 2});
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd p(map.expanded_vertex_count());
  for (int i = 0; i < p.size(); ++i) p[i] = unif(rng);
  EXPECT_NEAR(aggregate_probability(p, map).sum(), p.sum(), 1e-12);
}

TEST(AggregateProbability, ProductDistributionMarginalIsExact) {
  // Dyadic internal splits keep every partial sum exact.
  const ExpansionMap map({2, 3});
  Eigen::VectorXd base(2);
  base << 0.3, 0.7;
  Eigen::VectorXd expanded(5);
  expanded << base[0] * 0.5, base[0] * 0.5, base[1] * 0.5, base[1] * 0.25,
      base[1] * 0.25;
  const Eigen::VectorXd recovered = aggregate_probability(expanded, map);
  EXPECT_EQ(recovered[0], base[0]);
  EXPECT_EQ(recovered[1], base[1]);
}

TEST(AggregateProbability, RejectsLengthMismatch) {
  EXPECT_THROW(aggregate_probability(Eigen::VectorXd::Zero(3),
                                     ExpansionMap({2, 2})),
               DimensionError);
}

TEST(AggregateCurrent, ZeroMapsToZero) {
  const ExpansionMap map({2, 2});
  const Eigen::MatrixXd base =
      aggregate_current(Eigen::MatrixXd::Zero(4, 4), map);
  EXPECT_EQ(base.cwiseAbs().maxCoeff(), 0.0);
}

TEST(AggregateCurrent, IdentityWhenDimsAreOne) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd j(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) j(a, b) = gauss(rng);
  j = (j - j.transpose()).eval();
  EXPECT_EQ(aggregate_current(j, ExpansionMap({1, 1, 1})), j);
}

TEST(AggregateCurrent, PreservesAntisymmetry) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss;
  const ExpansionMap map({2, 3, 1});
  const int n = map.expanded_vertex_count();
  Eigen::MatrixXd j(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) j(a, b) = gauss(rng);
  j = (j - j.transpose()).eval();
  const Eigen::MatrixXd base = aggregate_current(j, map);
  EXPECT_LE((base + base.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AggregateCurrent, RejectsDimensionMismatch) {
  EXPECT_THROW(aggregate_current(Eigen::MatrixXd::Zero(3, 3),
                                 ExpansionMap({2, 2})),
               DimensionError);
}
