#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwflow/errors.hpp"

namespace qwflow {

struct Edge {
  int from = 0;
  int to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed graph on vertices 0..N-1 with every self-loop present. Instances
// are immutable after construction; adjacency is kept both as out-lists (for
// traversal) and as a dense membership table (for O(1) locality checks).
class DirectedGraph {
 public:
  DirectedGraph() = default;

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool has_edge(int from, int to) const {
    return adj_[static_cast<std::size_t>(from) * n_ + to] != 0;
  }

  const std::vector<int>& out_neighbors(int v) const { return out_[v]; }

  // Sorted by (from, to), duplicates collapsed, self-loops included.
  const std::vector<Edge>& edges() const { return edges_; }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  friend DirectedGraph build_graph(int vertex_count,
                                   const std::vector<Edge>& edges);

  int n_ = 0;
  std::vector<std::uint8_t> adj_;      // row-major [from][to]
  std::vector<std::vector<int>> out_;  // sorted out-neighbor lists
  std::vector<Edge> edges_;
};

// Builds a graph, silently adding missing self-loops and collapsing
// duplicate edges.
inline DirectedGraph build_graph(int vertex_count,
                                 const std::vector<Edge>& edges) {
  if (vertex_count < 1)
    throw InvalidArgumentError("vertex_count must be >= 1, got " +
                               std::to_string(vertex_count));
  DirectedGraph g;
  g.n_ = vertex_count;
  g.adj_.assign(static_cast<std::size_t>(vertex_count) * vertex_count, 0);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= vertex_count || e.to < 0 ||
        e.to >= vertex_count)
      throw IndexError("edge (" + std::to_string(e.from) + " -> " +
                       std::to_string(e.to) + ") out of range for " +
                       std::to_string(vertex_count) + " vertices");
    g.adj_[static_cast<std::size_t>(e.from) * vertex_count + e.to] = 1;
  }
  for (int v = 0; v < vertex_count; ++v)
    g.adj_[static_cast<std::size_t>(v) * vertex_count + v] = 1;
  g.out_.resize(vertex_count);
  for (int from = 0; from < vertex_count; ++from)
    for (int to = 0; to < vertex_count; ++to)
      if (g.has_edge(from, to)) {
        g.out_[from].push_back(to);
        g.edges_.push_back({from, to});
      }
  return g;
}

// True when every edge n -> m admits a directed return path m ~> n, i.e.
// both endpoints of each edge lie in one strongly connected component.
inline bool is_reversible(const DirectedGraph& g) {
  const int n = g.vertex_count();
  std::vector<int> comp(n, -1), low(n, 0), num(n, -1), stack;
  std::vector<std::uint8_t> on_stack(n, 0);
  int counter = 0, comp_count = 0;
  auto dfs = [&](auto&& self, int v) -> void {
    num[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (int w : g.out_neighbors(v)) {
      if (num[w] == -1) {
        self(self, w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], num[w]);
      }
    }
    if (low[v] == num[v]) {
      while (true) {
        int w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = comp_count;
        if (w == v) break;
      }
      ++comp_count;
    }
  };
  for (int v = 0; v < n; ++v)
    if (num[v] == -1) dfs(dfs, v);
  for (const Edge& e : g.edges())
    if (comp[e.from] != comp[e.to]) return false;
  return true;
}

// Bijection between expanded vertices and (base vertex, internal state)
// pairs, flattened row-major: (n, k) -> offset(n) + k with
// offset(n) = sum of dims[j] for j < n.
class ExpansionMap {
 public:
  explicit ExpansionMap(std::vector<int> internal_dims)
      : dims_(std::move(internal_dims)) {
    offsets_.resize(dims_.size() + 1, 0);
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (dims_[i] < 1)
        throw InvalidArgumentError("internal dimension of vertex " +
                                   std::to_string(i) + " must be positive");
      offsets_[i + 1] = offsets_[i] + dims_[i];
    }
  }

  int base_vertex_count() const { return static_cast<int>(dims_.size()); }
  int expanded_vertex_count() const { return offsets_.back(); }
  int internal_dim(int base) const { return dims_[base]; }
  const std::vector<int>& internal_dims() const { return dims_; }
  const std::vector<int>& offsets() const { return offsets_; }

  int flat_index(int base, int k) const {
    if (base < 0 || base >= base_vertex_count() || k < 0 || k >= dims_[base])
      throw IndexError("(" + std::to_string(base) + ", " + std::to_string(k) +
                       ") outside the expansion map");
    return offsets_[base] + k;
  }

  std::pair<int, int> base_index(int flat) const {
    if (flat < 0 || flat >= expanded_vertex_count())
      throw IndexError("expanded index " + std::to_string(flat) +
                       " out of range");
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
    const int base = static_cast<int>(it - offsets_.begin()) - 1;
    return {base, flat - offsets_[base]};
  }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
};

// Replaces each vertex n by internal_dims[n] copies; edge (n,k) -> (m,l)
// exists iff n -> m does in the base graph.
inline std::pair<DirectedGraph, ExpansionMap> expand_internal(
    const DirectedGraph& g, const std::vector<int>& internal_dims) {
  if (static_cast<int>(internal_dims.size()) != g.vertex_count())
    throw InvalidArgumentError(
        "need one internal dimension per vertex: got " +
        std::to_string(internal_dims.size()) + " for " +
        std::to_string(g.vertex_count()) + " vertices");
  ExpansionMap map(internal_dims);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    for (int k = 0; k < map.internal_dim(e.from); ++k)
      for (int l = 0; l < map.internal_dim(e.to); ++l)
        edges.push_back({map.flat_index(e.from, k), map.flat_index(e.to, l)});
  return {build_graph(map.expanded_vertex_count(), edges), std::move(map)};
}

// P_n = sum_k P_(n,k); preserves the total.
inline Eigen::VectorXd aggregate_probability(const Eigen::VectorXd& expanded,
                                             const ExpansionMap& map) {
  if (expanded.size() != map.expanded_vertex_count())
    throw DimensionError("probability vector has length " +
                         std::to_string(expanded.size()) + ", expected " +
                         std::to_string(map.expanded_vertex_count()));
  Eigen::VectorXd base = Eigen::VectorXd::Zero(map.base_vertex_count());
  for (int n = 0; n < map.base_vertex_count(); ++n)
    for (int k = 0; k < map.internal_dim(n); ++k)
      base[n] += expanded[map.flat_index(n, k)];
  return base;
}

// J_mn = sum_{k,l} J_(m,l),(n,k); antisymmetry survives the blockwise sums.
inline Eigen::MatrixXd aggregate_current(const Eigen::MatrixXd& expanded,
                                         const ExpansionMap& map) {
  const int big = map.expanded_vertex_count();
  if (expanded.rows() != big || expanded.cols() != big)
    throw DimensionError("current matrix must be " + std::to_string(big) +
                         "x" + std::to_string(big));
  const int small = map.base_vertex_count();
  Eigen::MatrixXd base = Eigen::MatrixXd::Zero(small, small);
  for (int m = 0; m < small; ++m)
    for (int n = 0; n < small; ++n)
      for (int l = 0; l < map.internal_dim(m); ++l)
        for (int k = 0; k < map.internal_dim(n); ++k)
          base(m, n) += expanded(map.flat_index(m, l), map.flat_index(n, k));
  return base;
}

}  // namespace qwflow
