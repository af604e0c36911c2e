#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qwflow/errors.hpp"
#include "qwflow/graph.hpp"
#include "qwflow/tolerances.hpp"

namespace qwflow {

// Pure state over the vertex basis; construction checks normalization.
class PureState {
 public:
  explicit PureState(Eigen::VectorXcd amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() < 1) throw DimensionError("state must have dimension >= 1");
    const double dev = std::abs(amp_.squaredNorm() - 1.0);
    if (dev > kNormTol)
      throw NormalizationError("state norm^2 deviates from 1 by " +
                               detail::num(dev));
  }

  int dimension() const { return static_cast<int>(amp_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }

 private:
  Eigen::VectorXcd amp_;
};

// Density operator over the vertex basis; construction checks hermiticity,
// unit trace and positivity.
class DensityState {
 public:
  explicit DensityState(Eigen::MatrixXcd matrix) : rho_(std::move(matrix)) {
    if (rho_.rows() < 1 || rho_.rows() != rho_.cols())
      throw DimensionError("density matrix must be square and non-empty");
    const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kNormTol)
      throw InvalidArgumentError("density matrix is not Hermitian (deviation " +
                                 detail::num(herm) + ")");
    const std::complex<double> tr = rho_.trace();
    const double trace_dev = std::abs(tr - std::complex<double>(1.0, 0.0));
    if (trace_dev > kNormTol)
      throw NormalizationError("density matrix trace deviates from 1 by " +
                               detail::num(trace_dev));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_,
                                                       Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -kNormTol)
      throw InvalidArgumentError("density matrix has negative eigenvalue " +
                                 detail::num(min_eig));
  }

  int dimension() const { return static_cast<int>(rho_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return rho_; }

 private:
  Eigen::MatrixXcd rho_;
};

inline DensityState to_density(const PureState& psi) {
  return DensityState(psi.amplitudes() * psi.amplitudes().adjoint());
}

// Unitary step whose support respects a graph's edge set: U_mn can be
// nonzero only when n -> m is an edge.
class WalkOperator {
 public:
  int dimension() const { return static_cast<int>(u_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return u_; }
  const DirectedGraph& graph() const { return graph_; }

 private:
  friend WalkOperator validate_unitary(const Eigen::MatrixXcd& matrix,
                                       const DirectedGraph& g);
  WalkOperator(Eigen::MatrixXcd u, DirectedGraph g)
      : u_(std::move(u)), graph_(std::move(g)) {}

  Eigen::MatrixXcd u_;
  DirectedGraph graph_;
};

// Checks unitarity (within kNormTol) and graph locality (entries off the
// edge set at most kLocalityTol), reporting the first violating entry.
inline WalkOperator validate_unitary(const Eigen::MatrixXcd& matrix,
                                     const DirectedGraph& g) {
  const int n = g.vertex_count();
  if (matrix.rows() != n || matrix.cols() != n)
    throw DimensionError("operator must be " + std::to_string(n) + "x" +
                         std::to_string(n) + " to match the graph");
  const double dev =
      (matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (dev > kNormTol)
    throw UnitarityError(
        "matrix is not unitary: ||U'U - I||_max = " + detail::num(dev), dev);
  for (int m = 0; m < n; ++m)
    for (int src = 0; src < n; ++src)
      if (!g.has_edge(src, m) && std::abs(matrix(m, src)) > kLocalityTol)
        throw EdgeViolationError("|U(" + std::to_string(m) + "," +
                                     std::to_string(src) + ")| = " +
                                     detail::num(std::abs(matrix(m, src))) +
                                     " but the graph has no edge " +
                                     std::to_string(src) + " -> " +
                                     std::to_string(m),
                                 src, m);
  return WalkOperator(matrix, g);
}

// Kraus map {K_i} with sum_i K_i'K_i = I; every K_i respects the edge set.
class QuantumChannel {
 public:
  int dimension() const { return static_cast<int>(kraus_[0].rows()); }
  const std::vector<Eigen::MatrixXcd>& kraus_ops() const { return kraus_; }
  const DirectedGraph& graph() const { return graph_; }

 private:
  friend QuantumChannel validate_channel(
      const std::vector<Eigen::MatrixXcd>& kraus_ops, const DirectedGraph& g);
  QuantumChannel(std::vector<Eigen::MatrixXcd> kraus, DirectedGraph g)
      : kraus_(std::move(kraus)), graph_(std::move(g)) {}

  std::vector<Eigen::MatrixXcd> kraus_;
  DirectedGraph graph_;
};

inline QuantumChannel validate_channel(
    const std::vector<Eigen::MatrixXcd>& kraus_ops, const DirectedGraph& g) {
  if (kraus_ops.empty())
    throw InvalidArgumentError("channel needs at least one Kraus operator");
  const int n = g.vertex_count();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < kraus_ops.size(); ++i) {
    const Eigen::MatrixXcd& k = kraus_ops[i];
    if (k.rows() != n || k.cols() != n)
      throw DimensionError("Kraus operator " + std::to_string(i) +
                           " must be " + std::to_string(n) + "x" +
                           std::to_string(n));
    acc += k.adjoint() * k;
  }
  const double dev =
      (acc - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (dev > kNormTol)
    throw UnitarityError(
        "Kraus operators are not complete: ||sum K'K - I||_max = " +
            detail::num(dev),
        dev);
  for (std::size_t i = 0; i < kraus_ops.size(); ++i)
    for (int m = 0; m < n; ++m)
      for (int src = 0; src < n; ++src)
        if (!g.has_edge(src, m) &&
            std::abs(kraus_ops[i](m, src)) > kLocalityTol)
          throw EdgeViolationError(
              "Kraus operator " + std::to_string(i) + " has |K(" +
                  std::to_string(m) + "," + std::to_string(src) +
                  ")| > 0 but the graph has no edge " + std::to_string(src) +
                  " -> " + std::to_string(m),
              src, m);
  return QuantumChannel(kraus_ops, g);
}

inline PureState step_pure(const WalkOperator& op, const PureState& psi) {
  if (psi.dimension() != op.dimension())
    throw DimensionError("state dimension " + std::to_string(psi.dimension()) +
                         " does not match operator dimension " +
                         std::to_string(op.dimension()));
  return PureState(op.matrix() * psi.amplitudes());
}

inline DensityState step_channel(const QuantumChannel& ch,
                                 const DensityState& rho) {
  if (rho.dimension() != ch.dimension())
    throw DimensionError("state dimension " + std::to_string(rho.dimension()) +
                         " does not match channel dimension " +
                         std::to_string(ch.dimension()));
  const int n = rho.dimension();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (const Eigen::MatrixXcd& k : ch.kraus_ops())
    out += k * rho.matrix() * k.adjoint();
  return DensityState(std::move(out));
}

inline Eigen::VectorXd probabilities(const PureState& psi) {
  return psi.amplitudes().cwiseAbs2();
}

inline Eigen::VectorXd probabilities(const DensityState& rho) {
  return rho.matrix().diagonal().real();
}

// Cycle on `length` vertices, traversable in both directions, loops included.
inline DirectedGraph cycle_graph(int length) {
  if (length < 2) throw InvalidArgumentError("cycle needs at least 2 vertices");
  std::vector<Edge> edges;
  for (int v = 0; v < length; ++v) {
    edges.push_back({v, (v + 1) % length});
    edges.push_back({(v + 1) % length, v});
  }
  return build_graph(length, edges);
}

enum class ShiftRule { cyclic };

// Coined walk on a cycle of `positions` sites with a two-state coin,
// returned as a plain walk on the expanded graph (internal dims all 2).
// One step applies the coin at every site, then moves coin state 0 one site
// left and coin state 1 one site right, wrapping cyclically.
inline std::pair<WalkOperator, ExpansionMap> coined_line_walk(
    int positions, const Eigen::Matrix2cd& coin,
    ShiftRule rule = ShiftRule::cyclic) {
  static_cast<void>(rule);  // cyclic is the only supported boundary
  if (positions < 2)
    throw InvalidArgumentError("coined walk needs at least 2 positions");
  const double dev =
      (coin.adjoint() * coin - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  if (dev > kNormTol)
    throw UnitarityError(
        "coin is not unitary: ||C'C - I||_max = " + detail::num(dev), dev);
  auto [expanded, map] =
      expand_internal(cycle_graph(positions), std::vector<int>(positions, 2));
  const int dim = map.expanded_vertex_count();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < positions; ++n) {
    const int left = (n + positions - 1) % positions;
    const int right = (n + 1) % positions;
    for (int k = 0; k < 2; ++k) {
      u(map.flat_index(left, 0), map.flat_index(n, k)) = coin(0, k);
      u(map.flat_index(right, 1), map.flat_index(n, k)) = coin(1, k);
    }
  }
  return {validate_unitary(u, expanded), std::move(map)};
}

}  // namespace qwflow
