#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qwflow/graph.hpp"
#include "qwflow/quantum.hpp"
#include "qwflow/tolerances.hpp"

// Seeded generators for test instances. Graphs are derived FROM the support
// of a random unitary (plus self-loops) rather than the other way round, so
// every instance pairs a graph with an operator that is local to it.

namespace qwtest {

using complexd = std::complex<double>;

inline Eigen::MatrixXcd random_ginibre(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = complexd(gauss(rng), gauss(rng));
  return g;
}

// Haar-distributed dense unitary: QR of a Ginibre matrix with the phases of
// the R diagonal folded into Q.
inline Eigen::MatrixXcd random_unitary_dense(int n, std::mt19937_64& rng) {
  const Eigen::MatrixXcd g = random_ginibre(n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const complexd d = r(j, j);
    q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : complexd(1.0, 0.0);
  }
  return q;
}

// Product of random two-level rotations and phases; support stays sparse
// for small rotation counts, giving graphs with genuinely missing edges.
inline Eigen::MatrixXcd random_unitary_sparse(int n, int rotations,
                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_int_distribution<int> pick(0, n - 1);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  for (int v = 0; v < n; ++v)
    u(v, v) = std::polar(1.0, angle(rng));
  for (int r = 0; r < rotations; ++r) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    const double theta = angle(rng), phi = angle(rng);
    const complexd c(std::cos(theta), 0.0);
    const complexd s = std::polar(std::sin(theta), phi);
    Eigen::MatrixXcd rot = Eigen::MatrixXcd::Identity(n, n);
    rot(i, i) = c;
    rot(i, j) = -std::conj(s);
    rot(j, i) = s;
    rot(j, j) = c;
    u = rot * u;
  }
  return u;
}

inline qwflow::DirectedGraph graph_from_support(const Eigen::MatrixXcd& u) {
  const int n = static_cast<int>(u.rows());
  std::vector<qwflow::Edge> edges;
  for (int m = 0; m < n; ++m)
    for (int src = 0; src < n; ++src)
      if (std::abs(u(m, src)) > qwflow::kLocalityTol) edges.push_back({src, m});
  return qwflow::build_graph(n, edges);
}

inline Eigen::VectorXcd random_state_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = complexd(gauss(rng), gauss(rng));
  return v / v.norm();
}

// State supported on a strict subset of vertices: `zeros` amplitudes are
// exactly zero, so the corresponding P_n vanish.
inline Eigen::VectorXcd random_state_with_zeros(int n, int zeros,
                                                std::mt19937_64& rng) {
  Eigen::VectorXcd v = random_state_vector(n, rng);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < zeros && i < n - 1; ++i) v[order[i]] = 0.0;
  return v / v.norm();
}

inline qwflow::DirectedGraph random_graph(int n, double edge_probability,
                                          std::mt19937_64& rng) {
  std::bernoulli_distribution keep(edge_probability);
  std::vector<qwflow::Edge> edges;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (keep(rng)) edges.push_back({a, b});
  return qwflow::build_graph(n, edges);
}

struct Instance {
  qwflow::DirectedGraph graph;
  Eigen::MatrixXcd u;
  Eigen::VectorXcd psi;
  Eigen::VectorXd initial;
  Eigen::VectorXd final_probs;
};

// One step of a random graph-local walk. Alternates dense Haar unitaries
// with sparse rotation products; optionally zeroes some amplitudes so the
// degenerate-column rule gets exercised.
inline Instance random_instance(int n, std::mt19937_64& rng,
                                bool sparse = false, int state_zeros = 0) {
  Instance inst;
  inst.u = sparse ? random_unitary_sparse(n, std::max(1, n), rng)
                  : random_unitary_dense(n, rng);
  inst.graph = graph_from_support(inst.u);
  inst.psi = state_zeros > 0 ? random_state_with_zeros(n, state_zeros, rng)
                             : random_state_vector(n, rng);
  inst.initial = inst.psi.cwiseAbs2();
  inst.final_probs = (inst.u * inst.psi).cwiseAbs2();
  return inst;
}

// Dephasing channel: identity with probability 1-p, a random diagonal phase
// flip with probability p. Diagonal Kraus operators, local to any graph.
inline std::vector<Eigen::MatrixXcd> dephasing_channel(int n, double p,
                                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  Eigen::MatrixXcd phases = Eigen::MatrixXcd::Zero(n, n);
  for (int v = 0; v < n; ++v) phases(v, v) = std::polar(1.0, angle(rng));
  return {std::sqrt(1.0 - p) * Eigen::MatrixXcd::Identity(n, n),
          std::sqrt(p) * phases};
}

// Amplitude-mixing channel: each chosen edge n -> m leaks probability
// gamma from n to m; the remainder operator rescales the drained sources.
inline std::vector<Eigen::MatrixXcd> amplitude_mixing_channel(
    const qwflow::DirectedGraph& g, double gamma, std::mt19937_64& rng) {
  const int n = g.vertex_count();
  std::vector<Eigen::MatrixXcd> kraus;
  Eigen::VectorXd drained = Eigen::VectorXd::Zero(n);
  std::bernoulli_distribution pick(0.5);
  for (const qwflow::Edge& e : g.edges()) {
    if (e.from == e.to || !pick(rng)) continue;
    if (drained[e.from] + gamma >= 1.0) continue;
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(n, n);
    k(e.to, e.from) = std::sqrt(gamma);
    kraus.push_back(std::move(k));
    drained[e.from] += gamma;
  }
  Eigen::MatrixXcd rest = Eigen::MatrixXcd::Zero(n, n);
  for (int v = 0; v < n; ++v) rest(v, v) = std::sqrt(1.0 - drained[v]);
  kraus.insert(kraus.begin(), std::move(rest));
  return kraus;
}

inline Eigen::MatrixXcd random_density(int n, std::mt19937_64& rng) {
  const Eigen::MatrixXcd g = random_ginibre(n, rng);
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline Eigen::Matrix2cd hadamard_coin() {
  Eigen::Matrix2cd h;
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

}  // namespace qwtest
