#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qwflow/errors.hpp"
#include "qwflow/graph.hpp"
#include "qwflow/report.hpp"

// JSON formats:
//   graph           {"vertices": N, "edges": [[from, to], ...]}
//   complex matrix  {"rows": R, "cols": C, "data": [[re, im], ...]}  row-major
//   complex vector  {"size": N, "data": [[re, im], ...]}
//   real matrix     {"rows": R, "cols": C, "data": [x, ...]}         row-major
//   real vector     {"size": N, "data": [x, ...]}
//   channel         {"kraus": [<complex matrix>, ...]}
//   expansion map   {"base_vertices": B, "expanded_vertices": M,
//                    "dims": [...], "offsets": [...]}
//   report          [{"condition": ..., "pass": ..., "max_violation": ...}]
// Self-loops may be omitted in graph files; they are always present in
// memory. Numbers round-trip at full double precision.

namespace qwflow {

using nlohmann::json;

namespace detail {

inline const json& field(const json& doc, const char* key, const char* what) {
  if (!doc.is_object() || !doc.contains(key))
    throw ParseError(std::string(what) + ": missing field \"" + key + "\"");
  return doc.at(key);
}

inline int int_field(const json& doc, const char* key, const char* what) {
  const json& value = field(doc, key, what);
  if (!value.is_number_integer())
    throw ParseError(std::string(what) + ": field \"" + key +
                     "\" must be an integer");
  return value.get<int>();
}

inline std::complex<double> complex_entry(const json& value,
                                          const char* what) {
  if (!value.is_array() || value.size() != 2 || !value.at(0).is_number() ||
      !value.at(1).is_number())
    throw ParseError(std::string(what) +
                     ": complex entries must be [re, im] pairs");
  return {value.at(0).get<double>(), value.at(1).get<double>()};
}

inline double real_entry(const json& value, const char* what) {
  if (!value.is_number())
    throw ParseError(std::string(what) + ": entries must be numbers");
  return value.get<double>();
}

}  // namespace detail

inline json graph_to_json(const DirectedGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.from, e.to});
  return {{"vertices", g.vertex_count()}, {"edges", std::move(edges)}};
}

inline DirectedGraph graph_from_json(const json& doc) {
  const int n = detail::int_field(doc, "vertices", "graph");
  const json& edge_list = detail::field(doc, "edges", "graph");
  if (!edge_list.is_array()) throw ParseError("graph: \"edges\" must be an array");
  std::vector<Edge> edges;
  for (const json& e : edge_list) {
    if (!e.is_array() || e.size() != 2 || !e.at(0).is_number_integer() ||
        !e.at(1).is_number_integer())
      throw ParseError("graph: edges must be [from, to] integer pairs");
    edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  }
  return build_graph(n, edges);
}

inline json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Eigen::MatrixXcd complex_matrix_from_json(const json& doc) {
  const int rows = detail::int_field(doc, "rows", "complex matrix");
  const int cols = detail::int_field(doc, "cols", "complex matrix");
  const json& data = detail::field(doc, "data", "complex matrix");
  if (rows < 0 || cols < 0 ||
      !data.is_array() ||
      static_cast<int>(data.size()) != rows * cols)
    throw ParseError("complex matrix: \"data\" must hold rows*cols entries");
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = detail::complex_entry(data.at(i * cols + j), "complex matrix");
  return m;
}

inline json complex_vector_to_json(const Eigen::VectorXcd& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    data.push_back({v[i].real(), v[i].imag()});
  return {{"size", v.size()}, {"data", std::move(data)}};
}

inline Eigen::VectorXcd complex_vector_from_json(const json& doc) {
  const int size = detail::int_field(doc, "size", "complex vector");
  const json& data = detail::field(doc, "data", "complex vector");
  if (size < 0 || !data.is_array() || static_cast<int>(data.size()) != size)
    throw ParseError("complex vector: \"data\" must hold `size` entries");
  Eigen::VectorXcd v(size);
  for (int i = 0; i < size; ++i)
    v[i] = detail::complex_entry(data.at(i), "complex vector");
  return v;
}

inline json real_matrix_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Eigen::MatrixXd real_matrix_from_json(const json& doc) {
  const int rows = detail::int_field(doc, "rows", "real matrix");
  const int cols = detail::int_field(doc, "cols", "real matrix");
  const json& data = detail::field(doc, "data", "real matrix");
  if (rows < 0 || cols < 0 || !data.is_array() ||
      static_cast<int>(data.size()) != rows * cols)
    throw ParseError("real matrix: \"data\" must hold rows*cols entries");
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = detail::real_entry(data.at(i * cols + j), "real matrix");
  return m;
}

inline json real_vector_to_json(const Eigen::VectorXd& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v[i]);
  return {{"size", v.size()}, {"data", std::move(data)}};
}

inline Eigen::VectorXd real_vector_from_json(const json& doc) {
  const int size = detail::int_field(doc, "size", "real vector");
  const json& data = detail::field(doc, "data", "real vector");
  if (size < 0 || !data.is_array() || static_cast<int>(data.size()) != size)
    throw ParseError("real vector: \"data\" must hold `size` entries");
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i)
    v[i] = detail::real_entry(data.at(i), "real vector");
  return v;
}

inline json kraus_to_json(const std::vector<Eigen::MatrixXcd>& kraus_ops) {
  json ops = json::array();
  for (const Eigen::MatrixXcd& k : kraus_ops)
    ops.push_back(complex_matrix_to_json(k));
  return {{"kraus", std::move(ops)}};
}

inline std::vector<Eigen::MatrixXcd> kraus_from_json(const json& doc) {
  const json& ops = detail::field(doc, "kraus", "channel");
  if (!ops.is_array() || ops.empty())
    throw ParseError("channel: \"kraus\" must be a non-empty array");
  std::vector<Eigen::MatrixXcd> kraus;
  for (const json& op : ops) kraus.push_back(complex_matrix_from_json(op));
  return kraus;
}

inline json expansion_map_to_json(const ExpansionMap& map) {
  return {{"base_vertices", map.base_vertex_count()},
          {"expanded_vertices", map.expanded_vertex_count()},
          {"dims", map.internal_dims()},
          {"offsets", map.offsets()}};
}

inline ExpansionMap expansion_map_from_json(const json& doc) {
  const json& dims = detail::field(doc, "dims", "expansion map");
  if (!dims.is_array())
    throw ParseError("expansion map: \"dims\" must be an array");
  std::vector<int> values;
  for (const json& d : dims) {
    if (!d.is_number_integer())
      throw ParseError("expansion map: dims must be integers");
    values.push_back(d.get<int>());
  }
  return ExpansionMap(values);
}

inline json report_to_json(const VerifyReport& report) {
  json out = json::array();
  for (const ConditionCheck& c : report.checks)
    out.push_back({{"condition", c.condition},
                   {"pass", c.pass},
                   {"max_violation", c.max_violation}});
  return out;
}

}  // namespace qwflow
