#include <random>

#include <gtest/gtest.h>

#include "qwflow/simplex.hpp"
#include "support/oracles.hpp"

using namespace qwflow;

namespace {

LinearProgram make_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                      const Eigen::VectorXd& c) {
  return {a, b, c};
}

}  // namespace

TEST(Simplex, SingleConstraintOptimum) {
  // max x0 + 2 x1 with x0 + x1 = 1.
  Eigen::MatrixXd a(1, 2);
  a << 1.0, 1.0;
  Eigen::VectorXd b(1), c(2);
  b << 1.0;
  c << 1.0, 2.0;
  const SimplexSolution s = solve_simplex(make_lp(a, b, c));
  ASSERT_EQ(s.status, SimplexStatus::optimal);
  EXPECT_NEAR(s.objective, 2.0, 1e-12);
  EXPECT_NEAR(s.x[1], 1.0, 1e-12);
}

TEST(Simplex, TwoByTwoTransport) {
  // Supplies (0.6, 0.4), demands (0.5, 0.5); maximize the diagonal.
  Eigen::MatrixXd a(3, 4);
  // variables x(m,n) ordered x00, x10, x01, x11; columns sum to supply,
  // first row sum to demand.
  a << 1, 1, 0, 0,   // supply 0
       0, 0, 1, 1,   // supply 1
       1, 0, 1, 0;   // demand 0 (demand 1 dropped as redundant)
  Eigen::VectorXd b(3), c(4);
  b << 0.6, 0.4, 0.5;
  c << 1, 0, 0, 1;
  const SimplexSolution s = solve_simplex(make_lp(a, b, c));
  ASSERT_EQ(s.status, SimplexStatus::optimal);
  EXPECT_NEAR(s.objective, 0.9, 1e-12);  // x00=0.5, x10=0.1, x11=0.4
}

TEST(Simplex, DetectsInfeasibility) {
  // x0 + x1 = 1 and x0 + x1 = 2 cannot both hold.
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  Eigen::VectorXd b(2), c(2);
  b << 1.0, 2.0;
  c << 1.0, 0.0;
  EXPECT_EQ(solve_simplex(make_lp(a, b, c)).status, SimplexStatus::infeasible);
}

TEST(Simplex, DetectsUnboundedness) {
  // max x0 with x0 - x1 = 0: both can grow forever.
  Eigen::MatrixXd a(1, 2);
  a << 1.0, -1.0;
  Eigen::VectorXd b(1), c(2);
  b << 0.0;
  c << 1.0, 0.0;
  EXPECT_EQ(solve_simplex(make_lp(a, b, c)).status, SimplexStatus::unbounded);
}

TEST(Simplex, HandlesNegativeRhs) {
  // -x0 = -1 is x0 = 1 after the row flip.
  Eigen::MatrixXd a(1, 1);
  a << -1.0;
  Eigen::VectorXd b(1), c(1);
  b << -1.0;
  c << 3.0;
  const SimplexSolution s = solve_simplex(make_lp(a, b, c));
  ASSERT_EQ(s.status, SimplexStatus::optimal);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective, 3.0, 1e-12);
}

TEST(Simplex, DropsRedundantRows) {
  // Second row duplicates the first.
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  Eigen::VectorXd b(2), c(2);
  b << 1.0, 1.0;
  c << 0.0, 1.0;
  const SimplexSolution s = solve_simplex(make_lp(a, b, c));
  ASSERT_EQ(s.status, SimplexStatus::optimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
}

TEST(Simplex, MatchesBasicFeasibleEnumeration) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    // Random transportation polytope: 3 supplies, 3 demands, dense arcs.
    Eigen::VectorXd supply(3), demand(3);
    for (int i = 0; i < 3; ++i) supply[i] = unif(rng) + 0.1;
    supply /= supply.sum();
    for (int i = 0; i < 3; ++i) demand[i] = unif(rng) + 0.1;
    demand /= demand.sum();

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 9);
    Eigen::VectorXd b(5), c(9);
    for (int src = 0; src < 3; ++src)
      for (int dst = 0; dst < 3; ++dst) {
        const int var = 3 * src + dst;
        a(src, var) = 1.0;
        if (dst < 2) a(3 + dst, var) = 1.0;
        c[var] = unif(rng);
      }
    b.head(3) = supply;
    b.segment(3, 2) = demand.head(2);

    const SimplexSolution s = solve_simplex(make_lp(a, b, c));
    ASSERT_EQ(s.status, SimplexStatus::optimal);
    bool feasible = false;
    const double brute = qwtest::lp_optimum_brute(a, b, c, &feasible);
    ASSERT_TRUE(feasible);
    EXPECT_NEAR(s.objective, brute, 1e-9);
  }
}
