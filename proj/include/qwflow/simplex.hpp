#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwflow/errors.hpp"
#include "qwflow/tolerances.hpp"

namespace qwflow {

// Standard form: maximize objective . x subject to constraints * x = rhs,
// x >= 0.
struct LinearProgram {
  Eigen::MatrixXd constraints;
  Eigen::VectorXd rhs;
  Eigen::VectorXd objective;
};

enum class SimplexStatus { optimal, infeasible, unbounded };

struct SimplexSolution {
  SimplexStatus status = SimplexStatus::infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

namespace detail {

inline void simplex_pivot(Eigen::MatrixXd& tableau, std::vector<int>& basis,
                          int row, int col) {
  tableau.row(row) /= tableau(row, col);
  for (int i = 0; i < tableau.rows(); ++i)
    if (i != row && tableau(i, col) != 0.0)
      tableau.row(i) -= tableau(i, col) * tableau.row(row);
  basis[row] = col;
}

// Bland-rule iterations for the given per-column costs; the rightmost
// tableau column is the rhs. Bland's rule cannot cycle, the cap only guards
// against numerical stalls.
inline SimplexStatus run_simplex_phase(Eigen::MatrixXd& tableau,
                                       std::vector<int>& basis,
                                       const Eigen::VectorXd& cost,
                                       double pivot_tol) {
  const int rows = static_cast<int>(tableau.rows());
  const int cols = static_cast<int>(tableau.cols()) - 1;
  const long max_iterations = 200L * (rows + cols) * (rows + cols) + 10000L;
  for (long iter = 0; iter < max_iterations; ++iter) {
    int entering = -1;
    for (int j = 0; j < cols && entering == -1; ++j) {
      double reduced = cost[j];
      for (int i = 0; i < rows; ++i) reduced -= cost[basis[i]] * tableau(i, j);
      if (reduced > pivot_tol) entering = j;
    }
    if (entering == -1) return SimplexStatus::optimal;
    int leaving = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < rows; ++i) {
      if (tableau(i, entering) <= pivot_tol) continue;
      const double ratio = tableau(i, cols) / tableau(i, entering);
      if (leaving == -1 || ratio < best_ratio - pivot_tol ||
          (std::abs(ratio - best_ratio) <= pivot_tol &&
           basis[i] < basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving == -1) return SimplexStatus::unbounded;
    simplex_pivot(tableau, basis, leaving, entering);
  }
  throw Error("simplex did not terminate within the iteration cap");
}

}  // namespace detail

// Two-phase primal simplex on a dense tableau with Bland's rule. Sized for
// the small programs built here (tens of variables, a handful of rows).
// Redundant equality rows are detected in phase one and dropped.
inline SimplexSolution solve_simplex(const LinearProgram& lp,
                                     double pivot_tol = kPivotTol) {
  const int m = static_cast<int>(lp.constraints.rows());
  const int n = static_cast<int>(lp.constraints.cols());
  if (lp.rhs.size() != m)
    throw DimensionError("rhs length " + std::to_string(lp.rhs.size()) +
                         " does not match " + std::to_string(m) + " rows");
  if (lp.objective.size() != n)
    throw DimensionError("objective length " +
                         std::to_string(lp.objective.size()) +
                         " does not match " + std::to_string(n) + " columns");
  if (m < 1 || n < 1)
    throw InvalidArgumentError("linear program must be non-empty");

  // Phase one tableau: structural columns, artificial columns, rhs.
  Eigen::MatrixXd tableau(m, n + m + 1);
  tableau.block(0, 0, m, n) = lp.constraints;
  tableau.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  tableau.col(n + m) = lp.rhs;
  for (int i = 0; i < m; ++i)
    if (tableau(i, n + m) < 0.0) {
      tableau.row(i) = -tableau.row(i);
      tableau(i, n + i) = 1.0;  // keep the artificial column positive
    }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
  phase1_cost.tail(m).setConstant(-1.0);
  if (detail::run_simplex_phase(tableau, basis, phase1_cost, pivot_tol) ==
      SimplexStatus::unbounded)
    throw Error("phase-one simplex reported an unbounded program");

  double infeasibility = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) infeasibility += tableau(i, n + m);
  if (infeasibility > kVerifyTol) return {SimplexStatus::infeasible, {}, 0.0};

  // Drive remaining artificials out of the basis; rows where that is
  // impossible are redundant equalities.
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) {
      keep.push_back(i);
      continue;
    }
    int col = -1;
    for (int j = 0; j < n && col == -1; ++j)
      if (std::abs(tableau(i, j)) > pivot_tol) col = j;
    if (col != -1) {
      detail::simplex_pivot(tableau, basis, i, col);
      keep.push_back(i);
    }
  }

  const int m2 = static_cast<int>(keep.size());
  Eigen::MatrixXd phase2(m2, n + 1);
  std::vector<int> basis2(m2);
  for (int i = 0; i < m2; ++i) {
    phase2.block(i, 0, 1, n) = tableau.block(keep[i], 0, 1, n);
    phase2(i, n) = tableau(keep[i], n + m);
    basis2[i] = basis[keep[i]];
  }

  const SimplexStatus status =
      detail::run_simplex_phase(phase2, basis2, lp.objective, pivot_tol);
  if (status == SimplexStatus::unbounded)
    return {SimplexStatus::unbounded, {}, 0.0};

  SimplexSolution solution;
  solution.status = SimplexStatus::optimal;
  solution.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m2; ++i) solution.x[basis2[i]] = phase2(i, n);
  solution.objective = lp.objective.dot(solution.x);
  return solution;
}

}  // namespace qwflow
