#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "qwflow/errors.hpp"
#include "qwflow/flow.hpp"
#include "qwflow/graph.hpp"
#include "qwflow/report.hpp"
#include "qwflow/tolerances.hpp"

namespace qwflow {

// Net probability transferred between vertex pairs in one step:
// J(m, n) = f(m, n) - f(n, m). Real and antisymmetric; positive entries sit
// on edges of the graph.
struct CurrentMatrix {
  Eigen::MatrixXd J;
  DirectedGraph graph;
};

// Column-stochastic transition matrix S(m, n) = P(m|n).
struct StochasticMatrix {
  Eigen::MatrixXd S;
  DirectedGraph graph;
};

inline CurrentMatrix current_from_flow(const FlowMatrix& flow) {
  return {flow.f - flow.f.transpose(), flow.graph};
}

// Final distribution implied by the continuity condition:
// P'_n = P_n - sum_m J(m, n).
inline Eigen::VectorXd final_probabilities_from_current(
    const Eigen::MatrixXd& J, const Eigen::VectorXd& initial) {
  return initial - J.colwise().sum().transpose();
}

// Checks a current against a step (P -> P'): realness (carried by the
// type), antisymmetry, edge support of positive entries, per-vertex
// continuity, and the flux bound that outflow from a vertex cannot exceed
// its initial probability. m* membership uses strict positivity above tol.
inline VerifyReport verify_current(const Eigen::MatrixXd& J,
                                   const Eigen::VectorXd& initial,
                                   const Eigen::VectorXd& final_probs,
                                   const DirectedGraph& g,
                                   double tol = kVerifyTol) {
  const int n = g.vertex_count();
  if (J.rows() != n || J.cols() != n)
    throw DimensionError("current matrix must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  if (initial.size() != n || final_probs.size() != n)
    throw DimensionError("marginal vectors must have length " +
                         std::to_string(n));

  const double antisym = (J + J.transpose()).cwiseAbs().maxCoeff();
  double off_edge = 0.0;
  for (int m = 0; m < n; ++m)
    for (int src = 0; src < n; ++src)
      if (!g.has_edge(src, m)) off_edge = std::max(off_edge, J(m, src));
  off_edge = std::max(0.0, off_edge);

  double continuity = 0.0;
  double flux = 0.0;
  for (int src = 0; src < n; ++src) {
    continuity = std::max(
        continuity, std::abs(final_probs[src] - initial[src] + J.col(src).sum()));
    double outflow = 0.0;
    for (int m = 0; m < n; ++m)
      if (J(m, src) > tol) outflow += J(m, src);
    flux = std::max(flux, outflow - initial[src]);
  }
  flux = std::max(0.0, flux);

  VerifyReport report;
  report.checks = {{"real", true, 0.0},
                   {"antisymmetry", antisym <= tol, antisym},
                   {"edge-support", off_edge <= tol, off_edge},
                   {"continuity", continuity <= tol, continuity},
                   {"flux-bound", flux <= tol, flux}};
  return report;
}

// Rebuilds a flow from a current: positive off-diagonal entries become the
// directed transfers and the diagonal absorbs what stays put,
// f(n, n) = P_n - sum over m with J(m, n) > 0. The final distribution is
// recovered from continuity rather than supplied.
inline FlowMatrix flow_from_current(const Eigen::MatrixXd& J,
                                    const Eigen::VectorXd& initial,
                                    const DirectedGraph& g) {
  const int n = g.vertex_count();
  if (J.rows() != n || J.cols() != n)
    throw DimensionError("current matrix must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  detail::check_distribution(initial, n, "initial distribution");

  const Eigen::VectorXd final_probs = final_probabilities_from_current(J, initial);
  const VerifyReport report = verify_current(J, initial, final_probs, g);
  if (const ConditionCheck* c = report.find("antisymmetry"); !c->pass)
    throw InvalidArgumentError("current is not antisymmetric (deviation " +
                               detail::num(c->max_violation) + ")");
  if (const ConditionCheck* c = report.find("edge-support"); !c->pass)
    throw InvalidArgumentError(
        "current has positive entries off the edge set (worst " +
        detail::num(c->max_violation) + ")");
  if (const ConditionCheck* c = report.find("flux-bound"); !c->pass)
    throw InfeasibleError("flux bound violated by " +
                          detail::num(c->max_violation) +
                          "; no flow reproduces this current");

  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (int src = 0; src < n; ++src) {
    double outflow = 0.0;
    for (int m = 0; m < n; ++m) {
      if (m != src && J(m, src) > kZeroCutoff) {
        f(m, src) = J(m, src);
        outflow += J(m, src);
      }
    }
    double stays = initial[src] - outflow;
    if (stays < 0.0 && stays >= -kZeroCutoff) stays = 0.0;
    f(src, src) = stays;
  }
  return {std::move(f), g};
}

// P(m|n) = f(m, n) / P_n; columns with vanishing P_n fall back to the
// delta column to keep the matrix stochastic and edge-supported.
inline StochasticMatrix stochastic_from_flow(const FlowMatrix& flow,
                                             const Eigen::VectorXd& initial) {
  const int n = static_cast<int>(flow.f.rows());
  if (initial.size() != n)
    throw DimensionError("initial distribution must have length " +
                         std::to_string(n));
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int src = 0; src < n; ++src) {
    if (initial[src] > kZeroCutoff)
      s.col(src) = flow.f.col(src) / initial[src];
    else
      s(src, src) = 1.0;
  }
  return {std::move(s), flow.graph};
}

inline FlowMatrix flow_from_stochastic(const StochasticMatrix& stochastic,
                                       const Eigen::VectorXd& initial) {
  const int n = static_cast<int>(stochastic.S.rows());
  if (initial.size() != n)
    throw DimensionError("initial distribution must have length " +
                         std::to_string(n));
  return {stochastic.S * initial.asDiagonal(), stochastic.graph};
}

}  // namespace qwflow
