#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwflow/errors.hpp"
#include "qwflow/graph.hpp"
#include "qwflow/quantum.hpp"
#include "qwflow/report.hpp"
#include "qwflow/simplex.hpp"
#include "qwflow/tolerances.hpp"

namespace qwflow {

enum class CapacityMode { unit, amplitude };

// Layered source -> left layer -> right layer -> sink network. Source arcs
// carry the initial probabilities, sink arcs the final ones, and the middle
// capacity C(m, n) covers edge n -> m of the graph (zero off the edge set).
struct FlowNetwork {
  DirectedGraph graph;
  Eigen::VectorXd source_cap;   // P
  Eigen::VectorXd sink_cap;     // P'
  Eigen::MatrixXd middle_cap;   // C(m, n)
  CapacityMode mode = CapacityMode::unit;

  int vertex_count() const { return graph.vertex_count(); }
  int node_count() const { return 2 * graph.vertex_count() + 2; }
};

// Probability transfers along directed edges for one step. Column sums give
// the initial distribution, row sums the final one; f(n, n) is what stays.
struct FlowMatrix {
  Eigen::MatrixXd f;
  DirectedGraph graph;
};

namespace detail {

inline void check_distribution(const Eigen::VectorXd& p, int n,
                               const char* name) {
  if (p.size() != n)
    throw DimensionError(std::string(name) + " has length " +
                         std::to_string(p.size()) + ", expected " +
                         std::to_string(n));
  if (p.minCoeff() < -kZeroCutoff)
    throw NormalizationError(std::string(name) +
                             " has a negative entry: " + num(p.minCoeff()));
  const double dev = std::abs(p.sum() - 1.0);
  if (dev > kNormTol)
    throw NormalizationError(std::string(name) + " sums to 1 " +
                             (p.sum() > 1 ? "+ " : "- ") + num(dev) +
                             ", not a probability distribution");
}

}  // namespace detail

inline FlowNetwork build_flow_network(const Eigen::VectorXd& initial,
                                      const Eigen::VectorXd& final_probs,
                                      const DirectedGraph& g) {
  const int n = g.vertex_count();
  detail::check_distribution(initial, n, "initial distribution");
  detail::check_distribution(final_probs, n, "final distribution");
  FlowNetwork net;
  net.graph = g;
  net.source_cap = initial;
  net.sink_cap = final_probs;
  net.middle_cap = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) net.middle_cap(e.to, e.from) = 1.0;
  net.mode = CapacityMode::unit;
  return net;
}

// Switches the middle capacities: unit mode uses C(m, n) in {0, 1};
// amplitude mode uses C(m, n) = |U(m, n)|, which additionally bounds the
// extracted flow by the transition amplitudes.
inline FlowNetwork capacity_mode(const FlowNetwork& net, CapacityMode mode,
                                 const WalkOperator* op = nullptr) {
  FlowNetwork out = net;
  out.mode = mode;
  const int n = net.vertex_count();
  out.middle_cap = Eigen::MatrixXd::Zero(n, n);
  if (mode == CapacityMode::unit) {
    for (const Edge& e : net.graph.edges()) out.middle_cap(e.to, e.from) = 1.0;
    return out;
  }
  if (op == nullptr)
    throw InvalidArgumentError(
        "amplitude capacities need the walk operator");
  if (op->dimension() != n)
    throw DimensionError("operator dimension " +
                         std::to_string(op->dimension()) +
                         " does not match the network");
  for (const Edge& e : net.graph.edges())
    out.middle_cap(e.to, e.from) = std::abs(op->matrix()(e.to, e.from));
  return out;
}

struct MaxFlowResult {
  double value = 0.0;
  Eigen::MatrixXd edge_flow;    // flow on middle arc left_n -> right_m
  Eigen::VectorXd source_flow;  // flow on source -> left_n
  Eigen::VectorXd sink_flow;    // flow on right_m -> sink
};

namespace detail {

// Residual graph with paired arcs: arc id^1 is the reverse of arc id, so a
// push updates both in place and the flow on an arc is its reverse residual.
struct ResidualGraph {
  struct Arc {
    int to;
    double residual;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;

  explicit ResidualGraph(int nodes) : out(nodes) {}

  int add_arc(int from, int to, double capacity) {
    const int id = static_cast<int>(arcs.size());
    arcs.push_back({to, capacity});
    arcs.push_back({from, 0.0});
    out[from].push_back(id);
    out[to].push_back(id + 1);
    return id;
  }

  double flow_on(int id) const { return arcs[id ^ 1].residual; }
};

}  // namespace detail

// Shortest-augmenting-path max flow. The augmentation bound of this
// discipline is independent of capacity values, so real capacities are
// safe; residuals at or below kResidualTol count as exhausted.
inline MaxFlowResult max_flow(const FlowNetwork& net) {
  const int n = net.vertex_count();
  const int source = 0, sink = 1;
  const auto left = [](int v) { return 2 + v; };
  const auto right = [n](int v) { return 2 + n + v; };

  detail::ResidualGraph rg(net.node_count());
  std::vector<int> src_arc(n, -1), snk_arc(n, -1);
  Eigen::MatrixXi mid_arc = Eigen::MatrixXi::Constant(n, n, -1);
  for (int v = 0; v < n; ++v)
    if (net.source_cap[v] > 0.0)
      src_arc[v] = rg.add_arc(source, left(v), net.source_cap[v]);
  for (const Edge& e : net.graph.edges())
    if (net.middle_cap(e.to, e.from) > 0.0)
      mid_arc(e.to, e.from) =
          rg.add_arc(left(e.from), right(e.to), net.middle_cap(e.to, e.from));
  for (int v = 0; v < n; ++v)
    if (net.sink_cap[v] > 0.0)
      snk_arc[v] = rg.add_arc(right(v), sink, net.sink_cap[v]);

  std::vector<int> parent_arc(net.node_count());
  while (true) {
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    parent_arc[source] = -2;
    std::queue<int> frontier;
    frontier.push(source);
    while (!frontier.empty() && parent_arc[sink] == -1) {
      const int v = frontier.front();
      frontier.pop();
      for (int id : rg.out[v]) {
        const auto& arc = rg.arcs[id];
        if (arc.residual > kResidualTol && parent_arc[arc.to] == -1) {
          parent_arc[arc.to] = id;
          frontier.push(arc.to);
        }
      }
    }
    if (parent_arc[sink] == -1) break;
    double push = std::numeric_limits<double>::infinity();
    for (int v = sink; v != source; v = rg.arcs[parent_arc[v] ^ 1].to)
      push = std::min(push, rg.arcs[parent_arc[v]].residual);
    for (int v = sink; v != source; v = rg.arcs[parent_arc[v] ^ 1].to) {
      rg.arcs[parent_arc[v]].residual -= push;
      rg.arcs[parent_arc[v] ^ 1].residual += push;
    }
  }

  MaxFlowResult result;
  result.edge_flow = Eigen::MatrixXd::Zero(n, n);
  result.source_flow = Eigen::VectorXd::Zero(n);
  result.sink_flow = Eigen::VectorXd::Zero(n);
  for (int v = 0; v < n; ++v) {
    if (src_arc[v] != -1) result.source_flow[v] = rg.flow_on(src_arc[v]);
    if (snk_arc[v] != -1) result.sink_flow[v] = rg.flow_on(snk_arc[v]);
  }
  for (int m = 0; m < n; ++m)
    for (int src = 0; src < n; ++src)
      if (mid_arc(m, src) != -1)
        result.edge_flow(m, src) = rg.flow_on(mid_arc(m, src));
  result.value = result.source_flow.sum();
  return result;
}

// Reads the middle-arc flows off a value-one max flow. A value below one
// means no graph-local step can turn P into P'.
inline FlowMatrix extract_flow_matrix(const FlowNetwork& net,
                                      const MaxFlowResult& result) {
  if (result.value < 1.0 - kVerifyTol)
    throw InfeasibleError("max flow reaches only " + detail::num(result.value) +
                          " of the required unit of probability");
  Eigen::MatrixXd f = result.edge_flow;
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j)
      if (f(i, j) < 0.0 && f(i, j) >= -kZeroCutoff) f(i, j) = 0.0;
  return {std::move(f), net.graph};
}

enum class FlowObjective { max_stationary, none };

// Feasibility program over the per-edge transfers: column sums must match
// the initial distribution and row sums the final one. Both marginal
// families sum to one, so the last row-sum equality is redundant; it is
// dropped here and checked after the solve. Under max_stationary the solver
// maximizes the probability that stays put, which removes circulation.
inline FlowMatrix solve_flow_lp(const Eigen::VectorXd& initial,
                                const Eigen::VectorXd& final_probs,
                                const DirectedGraph& g,
                                FlowObjective objective) {
  const int n = g.vertex_count();
  detail::check_distribution(initial, n, "initial distribution");
  detail::check_distribution(final_probs, n, "final distribution");

  const std::vector<Edge>& edges = g.edges();
  const int vars = static_cast<int>(edges.size());
  const int rows = 2 * n - 1;
  LinearProgram lp;
  lp.constraints = Eigen::MatrixXd::Zero(rows, vars);
  lp.rhs = Eigen::VectorXd::Zero(rows);
  lp.objective = Eigen::VectorXd::Zero(vars);
  for (int j = 0; j < vars; ++j) {
    lp.constraints(edges[j].from, j) = 1.0;
    if (edges[j].to < n - 1) lp.constraints(n + edges[j].to, j) = 1.0;
    if (objective == FlowObjective::max_stationary &&
        edges[j].from == edges[j].to)
      lp.objective[j] = 1.0;
  }
  lp.rhs.head(n) = initial;
  lp.rhs.segment(n, n - 1) = final_probs.head(n - 1);

  const SimplexSolution solution = solve_simplex(lp);
  if (solution.status == SimplexStatus::infeasible)
    throw InfeasibleError(
        "no flow satisfies the marginal constraints: (P, P') is not "
        "reachable by any step local to this graph");
  if (solution.status == SimplexStatus::unbounded)
    throw Error("flow program cannot be unbounded");

  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < vars; ++j) {
    double value = solution.x[j];
    if (value < 0.0 && value >= -kZeroCutoff) value = 0.0;
    f(edges[j].to, edges[j].from) = value;
  }
  const double dropped = std::abs(f.row(n - 1).sum() - final_probs[n - 1]);
  if (dropped > kVerifyTol)
    throw InfeasibleError("dropped marginal constraint violated by " +
                          detail::num(dropped));
  return {std::move(f), g};
}

// Checks the four flow conditions: nonnegativity, edge support, column sums
// equal to the initial distribution, row sums equal to the final one.
inline VerifyReport verify_flow(const Eigen::MatrixXd& f,
                                const Eigen::VectorXd& initial,
                                const Eigen::VectorXd& final_probs,
                                const DirectedGraph& g,
                                double tol = kVerifyTol) {
  const int n = g.vertex_count();
  if (f.rows() != n || f.cols() != n)
    throw DimensionError("flow matrix must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  if (initial.size() != n || final_probs.size() != n)
    throw DimensionError("marginal vectors must have length " +
                         std::to_string(n));

  const double neg = std::max(0.0, -f.minCoeff());
  double off_edge = 0.0;
  for (int m = 0; m < n; ++m)
    for (int src = 0; src < n; ++src)
      if (!g.has_edge(src, m))
        off_edge = std::max(off_edge, std::abs(f(m, src)));
  const double col_dev =
      (f.colwise().sum().transpose() - initial).cwiseAbs().maxCoeff();
  const double row_dev =
      (f.rowwise().sum() - final_probs).cwiseAbs().maxCoeff();

  VerifyReport report;
  report.checks = {{"Flow1", neg <= tol, neg},
                   {"Flow2", off_edge <= tol, off_edge},
                   {"Flow3", col_dev <= tol, col_dev},
                   {"Flow4", row_dev <= tol, row_dev}};
  return report;
}

}  // namespace qwflow
