#include <map>
#include <string>

#include <CLI11.hpp>

#include "qwflow/cli.hpp"

namespace {

void add_io_options(CLI::App* sub, qwflow::RunConfig& cfg) {
  sub->add_option("--graph", cfg.graph_path, "Graph JSON (\"-\" for stdin)")
      ->required();
  sub->add_option("--tol", cfg.tol, "Verification tolerance")
      ->capture_default_str();
  sub->add_option("--out", cfg.output_path,
                  "Output path (\"-\" for stdout, the default)");
}

void add_solver_options(CLI::App* sub, qwflow::RunConfig& cfg) {
  static const std::map<std::string, qwflow::Solver> solvers{
      {"maxflow", qwflow::Solver::maxflow}, {"lp", qwflow::Solver::lp}};
  static const std::map<std::string, qwflow::CapacityMode> capacities{
      {"unit", qwflow::CapacityMode::unit},
      {"amplitude", qwflow::CapacityMode::amplitude}};
  static const std::map<std::string, qwflow::FlowObjective> objectives{
      {"max-stationary", qwflow::FlowObjective::max_stationary},
      {"none", qwflow::FlowObjective::none}};
  sub->add_option("--solver", cfg.solver, "Flow solver")
      ->transform(CLI::CheckedTransformer(solvers, CLI::ignore_case))
      ->default_str("maxflow");
  sub->add_option("--capacity", cfg.capacity, "Middle-arc capacity rule")
      ->transform(CLI::CheckedTransformer(capacities, CLI::ignore_case))
      ->default_str("unit");
  sub->add_option("--objective", cfg.objective, "LP objective")
      ->transform(CLI::CheckedTransformer(objectives, CLI::ignore_case))
      ->default_str("max-stationary");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Discrete-time quantum walks on directed graphs with certified local "
      "probability flows"};
  app.require_subcommand(1);
  qwflow::RunConfig cfg;

  CLI::App* verify = app.add_subcommand(
      "verify", "Check flow/current conservation conditions");
  add_io_options(verify, cfg);
  verify->add_option("--initial", cfg.initial_path, "Initial distribution JSON")
      ->required();
  verify->add_option("--final", cfg.final_path, "Final distribution JSON")
      ->required();
  verify->add_option("--flow", cfg.flow_path, "Flow matrix JSON");
  verify->add_option("--current", cfg.current_path, "Current matrix JSON");

  CLI::App* flow = app.add_subcommand(
      "flow", "Construct a probability flow for a (P, P') pair");
  add_io_options(flow, cfg);
  add_solver_options(flow, cfg);
  flow->add_option("--initial", cfg.initial_path, "Initial distribution JSON")
      ->required();
  flow->add_option("--final", cfg.final_path, "Final distribution JSON")
      ->required();
  flow->add_option("--operator", cfg.operator_path,
                   "Unitary JSON (needed for amplitude capacities)");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Evolve a state and certify every step");
  add_io_options(simulate, cfg);
  add_solver_options(simulate, cfg);
  simulate
      ->add_option("--operator", cfg.operator_path,
                   "Unitary or {\"kraus\": [...]} channel JSON")
      ->required();
  simulate
      ->add_option("--state", cfg.state_path,
                   "Pure-state vector or density-matrix JSON")
      ->required();
  simulate->add_option("--steps", cfg.steps, "Number of steps")
      ->capture_default_str();

  CLI::App* expand = app.add_subcommand(
      "expand", "Expand internal degrees of freedom into extra vertices");
  add_io_options(expand, cfg);
  expand
      ->add_option("--dims", cfg.dims,
                   "Internal dimension per vertex (comma separated)")
      ->required()
      ->delimiter(',');
  expand->add_option("--map-out", cfg.map_output_path,
                     "Where to write the index map JSON");

  CLI::App* prooflab = app.add_subcommand(
      "prooflab", "Brute-force cut and projector checks on small instances");
  add_io_options(prooflab, cfg);
  prooflab->add_option("--initial", cfg.initial_path,
                       "Initial distribution JSON");
  prooflab->add_option("--final", cfg.final_path, "Final distribution JSON");
  prooflab->add_option("--operator", cfg.operator_path, "Unitary JSON");
  prooflab->add_option("--state", cfg.state_path, "Pure-state JSON");
  prooflab
      ->add_option("--max-n", cfg.max_cut_vertices,
                   "Vertex cap for cut enumeration")
      ->capture_default_str();
  prooflab
      ->add_option("--projector-max-n", cfg.max_projector_vertices,
                   "Vertex cap for the projector sweep")
      ->capture_default_str();
  prooflab->add_flag("--projector", cfg.projector_sweep,
                     "Sweep all cross-capacity-free cuts through the "
                     "projector bound");
  static const std::map<std::string, qwflow::CapacityMode> capacities{
      {"unit", qwflow::CapacityMode::unit},
      {"amplitude", qwflow::CapacityMode::amplitude}};
  prooflab->add_option("--capacity", cfg.capacity, "Middle-arc capacity rule")
      ->transform(CLI::CheckedTransformer(capacities, CLI::ignore_case))
      ->default_str("unit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qwflow::kExitOk : qwflow::kExitUsage;
  }

  if (verify->parsed()) cfg.command = qwflow::Command::verify;
  if (flow->parsed()) cfg.command = qwflow::Command::flow;
  if (simulate->parsed()) cfg.command = qwflow::Command::simulate;
  if (expand->parsed()) cfg.command = qwflow::Command::expand;
  if (prooflab->parsed()) cfg.command = qwflow::Command::prooflab;
  return qwflow::run_command(cfg);
}
