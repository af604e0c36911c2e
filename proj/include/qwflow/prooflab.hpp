#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwflow/errors.hpp"
#include "qwflow/flow.hpp"
#include "qwflow/graph.hpp"
#include "qwflow/quantum.hpp"
#include "qwflow/tolerances.hpp"

namespace qwflow {

// A cut of the layered network, parameterized by the vertices whose source
// arc (a) and sink arc (b) the cut keeps. Disconnecting source from sink
// then forces every middle arc between a and b into the cut.
struct CutSpec {
  std::vector<int> a;
  std::vector<int> b;
};

namespace detail {

inline std::vector<std::uint8_t> subset_mask(const std::vector<int>& subset,
                                             int n, const char* name) {
  std::vector<std::uint8_t> mask(n, 0);
  for (int v : subset) {
    if (v < 0 || v >= n)
      throw IndexError(std::string(name) + " contains vertex " +
                       std::to_string(v) + ", outside 0.." +
                       std::to_string(n - 1));
    mask[v] = 1;
  }
  return mask;
}

}  // namespace detail

// Value of the cut: excluded source capacities, plus excluded sink
// capacities, plus every middle capacity crossing from a to b.
inline double cut_value(const CutSpec& spec, const FlowNetwork& net) {
  const int n = net.vertex_count();
  const auto in_a = detail::subset_mask(spec.a, n, "cut set A");
  const auto in_b = detail::subset_mask(spec.b, n, "cut set B");
  double value = 0.0;
  for (int v = 0; v < n; ++v) {
    if (!in_a[v]) value += net.source_cap[v];
    if (!in_b[v]) value += net.sink_cap[v];
  }
  for (int src = 0; src < n; ++src)
    if (in_a[src])
      for (int m = 0; m < n; ++m)
        if (in_b[m]) value += net.middle_cap(m, src);
  return value;
}

struct MinCutResult {
  double value = 0.0;
  CutSpec spec;
};

// Exhaustive minimum over all 4^N (a, b) cut pairs. Every partition cut of
// the layered network has this form, so the result equals the max flow.
inline MinCutResult min_cut_brute(const FlowNetwork& net,
                                  int max_vertices = 12) {
  const int n = net.vertex_count();
  if (n > std::min(max_vertices, 15))
    throw SizeError("minimum-cut enumeration covers 4^N pairs; N = " +
                    std::to_string(n) + " exceeds the cap of " +
                    std::to_string(std::min(max_vertices, 15)));
  const double total_initial = net.source_cap.sum();
  const double total_final = net.sink_cap.sum();

  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_a = 0, best_b = 0;
  std::vector<double> cross(n);
  for (std::uint32_t a = 0; a < (1u << n); ++a) {
    double kept_source = 0.0;
    std::fill(cross.begin(), cross.end(), 0.0);
    for (int src = 0; src < n; ++src)
      if (a >> src & 1u) {
        kept_source += net.source_cap[src];
        for (int m = 0; m < n; ++m) cross[m] += net.middle_cap(m, src);
      }
    const double source_cut = total_initial - kept_source;
    for (std::uint32_t b = 0; b < (1u << n); ++b) {
      double value = source_cut + total_final;
      for (int m = 0; m < n; ++m)
        if (b >> m & 1u) value += cross[m] - net.sink_cap[m];
      if (value < best) {
        best = value;
        best_a = a;
        best_b = b;
      }
    }
  }

  MinCutResult result;
  result.value = best;
  for (int v = 0; v < n; ++v) {
    if (best_a >> v & 1u) result.spec.a.push_back(v);
    if (best_b >> v & 1u) result.spec.b.push_back(v);
  }
  return result;
}

// True when no edge of the graph crosses from a to b, i.e. all middle
// capacities between the kept sides vanish.
inline bool cut_cross_free(const DirectedGraph& g, const CutSpec& spec) {
  const int n = g.vertex_count();
  const auto in_a = detail::subset_mask(spec.a, n, "cut set A");
  const auto in_b = detail::subset_mask(spec.b, n, "cut set B");
  for (int src = 0; src < n; ++src)
    if (in_a[src])
      for (int m = 0; m < n; ++m)
        if (in_b[m] && g.has_edge(src, m)) return false;
  return true;
}

struct ProjectorBound {
  double expectation = 0.0;       // <psi| (Pi_A + Pi_B) |psi>
  bool is_projector = false;      // (Pi_A + Pi_B)^2 = Pi_A + Pi_B
  double idempotency_defect = 0.0;
  double hermiticity_defect = 0.0;
  double cross_norm = 0.0;        // ||Pi_A Pi_B||_max
};

// Evaluates the projector side of the cut argument for a cut with no
// crossing edges: Pi_A projects on the kept initial vertices, Pi_B on the
// U-preimages of the kept final vertices. With no crossing edges the cross
// products vanish, the sum is a projector and the expectation is at most 1.
inline ProjectorBound projector_bound(const PureState& psi,
                                      const WalkOperator& op,
                                      const CutSpec& spec) {
  const int n = op.dimension();
  if (psi.dimension() != n)
    throw DimensionError("state dimension " + std::to_string(psi.dimension()) +
                         " does not match operator dimension " +
                         std::to_string(n));
  const auto in_a = detail::subset_mask(spec.a, n, "cut set A");
  const auto in_b = detail::subset_mask(spec.b, n, "cut set B");
  for (int src = 0; src < n; ++src)
    if (in_a[src])
      for (int m = 0; m < n; ++m)
        if (in_b[m] && op.graph().has_edge(src, m))
          throw InvalidCutError("edge " + std::to_string(src) + " -> " +
                                std::to_string(m) +
                                " crosses the cut; the projector argument "
                                "needs vanishing cross capacities");

  Eigen::MatrixXcd pi_a = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd kept_b = Eigen::VectorXcd::Zero(n);
  for (int v = 0; v < n; ++v) {
    if (in_a[v]) pi_a(v, v) = 1.0;
    if (in_b[v]) kept_b[v] = 1.0;
  }
  const Eigen::MatrixXcd pi_b =
      op.matrix().adjoint() * kept_b.asDiagonal() * op.matrix();
  const Eigen::MatrixXcd sum = pi_a + pi_b;

  ProjectorBound bound;
  bound.expectation =
      (psi.amplitudes().adjoint() * sum * psi.amplitudes())(0, 0).real();
  bound.idempotency_defect = (sum * sum - sum).cwiseAbs().maxCoeff();
  bound.hermiticity_defect = (sum - sum.adjoint()).cwiseAbs().maxCoeff();
  bound.cross_norm = (pi_a * pi_b).cwiseAbs().maxCoeff();
  bound.is_projector = bound.idempotency_defect <= kVerifyTol &&
                       bound.hermiticity_defect <= kVerifyTol;
  return bound;
}

}  // namespace qwflow
