#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "qwflow/current.hpp"
#include "qwflow/errors.hpp"
#include "qwflow/flow.hpp"
#include "qwflow/graph.hpp"
#include "qwflow/io.hpp"
#include "qwflow/prooflab.hpp"
#include "qwflow/quantum.hpp"
#include "qwflow/tolerances.hpp"

namespace qwflow {

// Exit contract: 0 success, 1 verification failure or infeasibility,
// 2 input/usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

enum class Command { verify, flow, simulate, expand, prooflab };
enum class Solver { maxflow, lp };

struct RunConfig {
  Command command = Command::verify;
  std::string graph_path;
  std::string operator_path;
  std::string state_path;
  std::string flow_path;
  std::string current_path;
  std::string initial_path;
  std::string final_path;
  std::vector<int> dims;
  int steps = 1;
  Solver solver = Solver::maxflow;
  CapacityMode capacity = CapacityMode::unit;
  FlowObjective objective = FlowObjective::max_stationary;
  double tol = kVerifyTol;
  std::string output_path = "-";
  std::string map_output_path;
  int max_cut_vertices = 12;
  int max_projector_vertices = 8;
  bool projector_sweep = false;
};

namespace detail {

inline json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    text = buffer.str();
  } else {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw ParseError("malformed JSON in " + (path == "-" ? "stdin" : path));
  return doc;
}

inline void write_json(const std::string& path, const json& doc) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << doc.dump(2) << "\n";
}

// Either a unitary step or a Kraus channel, depending on the document keys.
using Step = std::variant<WalkOperator, QuantumChannel>;

inline Step load_step(const std::string& path, const DirectedGraph& g) {
  const json doc = read_json(path);
  if (doc.is_object() && doc.contains("kraus"))
    return validate_channel(kraus_from_json(doc), g);
  return validate_unitary(complex_matrix_from_json(doc), g);
}

using State = std::variant<PureState, DensityState>;

inline State load_state(const std::string& path) {
  const json doc = read_json(path);
  if (doc.is_object() && doc.contains("rows"))
    return DensityState(complex_matrix_from_json(doc));
  return PureState(complex_vector_from_json(doc));
}

}  // namespace detail

inline int cmd_verify(const RunConfig& cfg) {
  const DirectedGraph g = graph_from_json(detail::read_json(cfg.graph_path));
  const Eigen::VectorXd initial =
      real_vector_from_json(detail::read_json(cfg.initial_path));
  const Eigen::VectorXd final_probs =
      real_vector_from_json(detail::read_json(cfg.final_path));
  if (cfg.flow_path.empty() && cfg.current_path.empty())
    throw InvalidArgumentError("verify needs --flow and/or --current");

  json out;
  bool pass = true;
  if (!cfg.flow_path.empty()) {
    const Eigen::MatrixXd f =
        real_matrix_from_json(detail::read_json(cfg.flow_path));
    const VerifyReport report = verify_flow(f, initial, final_probs, g, cfg.tol);
    out["flow"] = report_to_json(report);
    pass = pass && report.all_pass();
  }
  if (!cfg.current_path.empty()) {
    const Eigen::MatrixXd J =
        real_matrix_from_json(detail::read_json(cfg.current_path));
    const VerifyReport report =
        verify_current(J, initial, final_probs, g, cfg.tol);
    out["current"] = report_to_json(report);
    pass = pass && report.all_pass();
  }
  out["pass"] = pass;
  detail::write_json(cfg.output_path, out);
  return pass ? kExitOk : kExitCheckFailed;
}

namespace detail {

inline FlowMatrix solve_flow(const RunConfig& cfg, const Eigen::VectorXd& initial,
                             const Eigen::VectorXd& final_probs,
                             const DirectedGraph& g, const WalkOperator* op) {
  if (cfg.capacity == CapacityMode::amplitude && cfg.solver == Solver::lp)
    throw InvalidArgumentError(
        "amplitude capacities apply to the maxflow solver only");
  if (cfg.solver == Solver::lp)
    return solve_flow_lp(initial, final_probs, g, cfg.objective);
  FlowNetwork net = build_flow_network(initial, final_probs, g);
  if (cfg.capacity == CapacityMode::amplitude)
    net = capacity_mode(net, CapacityMode::amplitude, op);
  return extract_flow_matrix(net, max_flow(net));
}

}  // namespace detail

inline int cmd_flow(const RunConfig& cfg) {
  const DirectedGraph g = graph_from_json(detail::read_json(cfg.graph_path));
  const Eigen::VectorXd initial =
      real_vector_from_json(detail::read_json(cfg.initial_path));
  const Eigen::VectorXd final_probs =
      real_vector_from_json(detail::read_json(cfg.final_path));
  std::optional<WalkOperator> op;
  if (!cfg.operator_path.empty())
    op = validate_unitary(
        complex_matrix_from_json(detail::read_json(cfg.operator_path)), g);
  if (cfg.capacity == CapacityMode::amplitude && !op)
    throw InvalidArgumentError("amplitude capacities need --operator");

  const FlowMatrix flow = detail::solve_flow(cfg, initial, final_probs, g,
                                             op ? &*op : nullptr);
  detail::write_json(cfg.output_path, real_matrix_to_json(flow.f));
  return kExitOk;
}

inline int cmd_simulate(const RunConfig& cfg) {
  if (cfg.steps < 1) throw InvalidArgumentError("--steps must be >= 1");
  const DirectedGraph g = graph_from_json(detail::read_json(cfg.graph_path));
  const detail::Step step_op = detail::load_step(cfg.operator_path, g);
  detail::State state = detail::load_state(cfg.state_path);

  const WalkOperator* unitary = std::get_if<WalkOperator>(&step_op);
  if (cfg.capacity == CapacityMode::amplitude && unitary == nullptr)
    throw InvalidArgumentError(
        "amplitude capacities need a unitary operator, not a channel");
  // A channel step needs a density state; a unitary applied to a density
  // state acts as its single-Kraus channel.
  if (std::holds_alternative<QuantumChannel>(step_op) &&
      std::holds_alternative<PureState>(state))
    state = to_density(std::get<PureState>(state));
  std::optional<QuantumChannel> as_channel;
  if (unitary != nullptr && std::holds_alternative<DensityState>(state))
    as_channel = validate_channel({unitary->matrix()}, g);

  json records = json::array();
  bool ok = true;
  int failed_step = 0;
  std::string failure;
  for (int t = 1; t <= cfg.steps && ok; ++t) {
    Eigen::VectorXd initial, final_probs;
    if (const PureState* psi = std::get_if<PureState>(&state)) {
      initial = probabilities(*psi);
      PureState next = step_pure(*unitary, *psi);
      final_probs = probabilities(next);
      state = std::move(next);
    } else {
      const DensityState& rho = std::get<DensityState>(state);
      initial = probabilities(rho);
      const QuantumChannel& ch =
          as_channel ? *as_channel : std::get<QuantumChannel>(step_op);
      DensityState next = step_channel(ch, rho);
      final_probs = probabilities(next);
      state = std::move(next);
    }

    json record;
    record["step"] = t;
    record["P"] = real_vector_to_json(initial);
    record["P_prime"] = real_vector_to_json(final_probs);
    try {
      const FlowMatrix flow =
          detail::solve_flow(cfg, initial, final_probs, g, unitary);
      const CurrentMatrix current = current_from_flow(flow);
      const StochasticMatrix stochastic = stochastic_from_flow(flow, initial);
      const VerifyReport flow_report =
          verify_flow(flow.f, initial, final_probs, g, cfg.tol);
      const VerifyReport current_report =
          verify_current(current.J, initial, final_probs, g, cfg.tol);
      record["flow"] = real_matrix_to_json(flow.f);
      record["current"] = real_matrix_to_json(current.J);
      record["stochastic"] = real_matrix_to_json(stochastic.S);
      record["flow_report"] = report_to_json(flow_report);
      record["current_report"] = report_to_json(current_report);
      if (!flow_report.all_pass() || !current_report.all_pass()) {
        ok = false;
        failed_step = t;
        failure = "verification failed";
      }
    } catch (const InfeasibleError& e) {
      ok = false;
      failed_step = t;
      failure = e.what();
      record["error"] = failure;
    }
    records.push_back(std::move(record));
  }

  json out;
  out["steps"] = std::move(records);
  out["ok"] = ok;
  if (!ok) {
    out["failed_step"] = failed_step;
    out["failure"] = failure;
  }
  detail::write_json(cfg.output_path, out);
  return ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_expand(const RunConfig& cfg) {
  const DirectedGraph g = graph_from_json(detail::read_json(cfg.graph_path));
  auto [expanded, map] = expand_internal(g, cfg.dims);
  detail::write_json(cfg.output_path, graph_to_json(expanded));
  if (!cfg.map_output_path.empty())
    detail::write_json(cfg.map_output_path, expansion_map_to_json(map));
  return kExitOk;
}

inline int cmd_prooflab(const RunConfig& cfg) {
  const DirectedGraph g = graph_from_json(detail::read_json(cfg.graph_path));
  std::optional<WalkOperator> op;
  std::optional<PureState> psi;
  Eigen::VectorXd initial, final_probs;
  if (!cfg.operator_path.empty() && !cfg.state_path.empty()) {
    op = validate_unitary(
        complex_matrix_from_json(detail::read_json(cfg.operator_path)), g);
    psi = PureState(complex_vector_from_json(detail::read_json(cfg.state_path)));
    initial = probabilities(*psi);
    final_probs = probabilities(step_pure(*op, *psi));
  } else if (!cfg.initial_path.empty() && !cfg.final_path.empty()) {
    initial = real_vector_from_json(detail::read_json(cfg.initial_path));
    final_probs = real_vector_from_json(detail::read_json(cfg.final_path));
  } else {
    throw InvalidArgumentError(
        "prooflab needs --operator with --state, or --initial with --final");
  }

  FlowNetwork net = build_flow_network(initial, final_probs, g);
  if (cfg.capacity == CapacityMode::amplitude) {
    if (!op) throw InvalidArgumentError("amplitude capacities need --operator");
    net = capacity_mode(net, CapacityMode::amplitude, &*op);
  }
  const MinCutResult cut = min_cut_brute(net, cfg.max_cut_vertices);
  const double crosscheck = max_flow(net).value;

  json out;
  out["min_cut"] = cut.value;
  out["argmin_A"] = cut.spec.a;
  out["argmin_B"] = cut.spec.b;
  out["maxflow_crosscheck"] = crosscheck;
  out["feasible"] = cut.value >= 1.0 - cfg.tol;

  if (cfg.projector_sweep) {
    if (!op || !psi)
      throw InvalidArgumentError("--projector needs --operator and --state");
    const int n = g.vertex_count();
    if (n > cfg.max_projector_vertices)
      throw SizeError("projector sweep covers 4^N pairs; N = " +
                      std::to_string(n) + " exceeds the cap of " +
                      std::to_string(cfg.max_projector_vertices));
    int pairs = 0;
    double max_expectation = 0.0, worst_defect = 0.0, worst_cross = 0.0;
    bool all_projectors = true;
    for (std::uint32_t a = 0; a < (1u << n); ++a)
      for (std::uint32_t b = 0; b < (1u << n); ++b) {
        CutSpec spec;
        for (int v = 0; v < n; ++v) {
          if (a >> v & 1u) spec.a.push_back(v);
          if (b >> v & 1u) spec.b.push_back(v);
        }
        if (!cut_cross_free(g, spec)) continue;
        const ProjectorBound bound = projector_bound(*psi, *op, spec);
        ++pairs;
        max_expectation = std::max(max_expectation, bound.expectation);
        worst_defect = std::max(worst_defect, bound.idempotency_defect);
        worst_cross = std::max(worst_cross, bound.cross_norm);
        all_projectors = all_projectors && bound.is_projector;
      }
    out["projector_sweep"] = {{"pairs", pairs},
                              {"max_expectation", max_expectation},
                              {"max_idempotency_defect", worst_defect},
                              {"max_cross_norm", worst_cross},
                              {"all_projectors", all_projectors}};
  }

  detail::write_json(cfg.output_path, out);
  return cut.value >= 1.0 - cfg.tol ? kExitOk : kExitCheckFailed;
}

// Dispatches a parsed configuration and maps errors onto the exit contract.
inline int run_command(const RunConfig& cfg) {
  try {
    if (cfg.tol <= 0.0) throw InvalidArgumentError("--tol must be positive");
    switch (cfg.command) {
      case Command::verify:
        return cmd_verify(cfg);
      case Command::flow:
        return cmd_flow(cfg);
      case Command::simulate:
        return cmd_simulate(cfg);
      case Command::expand:
        return cmd_expand(cfg);
      case Command::prooflab:
        return cmd_prooflab(cfg);
    }
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qwflow
