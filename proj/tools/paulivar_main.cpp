// paulivar: measurement-scheme optimization and exact variance evaluation
// for Pauli-sum observables.
//
// Subcommands:
//   group            build a grouping (clique cover) of a Hamiltonian
//   evaluate         evaluate a scheme's exact variance/bias/shot budget
//   simulate         Monte Carlo validation of an evaluated scheme
//   import-schedule  turn an external measurement schedule into a cover
//
// Exit codes: 0 success, 1 parse/format error, 2 infeasible preconditions,
// 3 eigensolver non-convergence.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "paulivar/allocation.hpp"
#include "paulivar/cover.hpp"
#include "paulivar/graph.hpp"
#include "paulivar/io.hpp"
#include "paulivar/postprocess.hpp"
#include "paulivar/simulate.hpp"
#include "paulivar/state.hpp"
#include "paulivar/variance.hpp"
#include "paulivar/variance_aware.hpp"

namespace {

using nlohmann::json;
using namespace paulivar;

constexpr int kExitParse = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNoConvergence = 3;

struct GroupArgs {
  std::string hamiltonian;
  std::string mode = "qwc";
  std::string algorithm;
  std::string pricing = "exact";
  double time_limit = 60.0;
  std::size_t clique_cap = 1000000;
  std::string out;
  std::string graph_stats_out;
};

int run_group(const GroupArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  const PauliSum o = parse_pauli_sum(read_text_file(args.hamiltonian));
  const CommutationMode mode = commutation_mode_from_string(args.mode);
  const CommutationGraph g = build_graph(o, mode);
  const std::chrono::duration<double> budget(args.time_limit);

  std::optional<GroupCover> cover;
  bool optimal = false;
  bool has_optimality = false;
  if (args.algorithm == "ldf") {
    cover = ldf_cover(g);
  } else if (args.algorithm == "rlf") {
    cover = rlf_cover(g);
  } else if (args.algorithm == "ldvf") {
    cover = ldvf_cover(g, o);
  } else if (args.algorithm == "lvf") {
    cover = lvf_cover(g, o);
  } else if (args.algorithm == "gsc" || args.algorithm == "ilp") {
    const CliqueSet cliques = enumerate_maximal_cliques(g, args.clique_cap);
    if (args.algorithm == "gsc") {
      cover = greedy_set_cover(cliques, g);
    } else {
      auto result = exact_set_cover(cliques, g, budget);
      cover = std::move(result.cover);
      optimal = result.optimal;
      has_optimality = true;
    }
  } else if (args.algorithm == "cg") {
    cover = column_generation_cover(g,
                                    args.pricing == "greedy"
                                        ? PricingMode::Greedy
                                        : PricingMode::Exact,
                                    budget);
  } else {
    throw ParseError("unknown algorithm '" + args.algorithm + "'");
  }
  validate_cover(*cover, g);

  json doc = cover_to_json(*cover, o);
  doc["generated_at"] = utc_timestamp();
  write_text_file(args.out, doc.dump(2) + "\n");

  if (!args.graph_stats_out.empty()) {
    const CliqueSet cliques = enumerate_maximal_cliques(g, args.clique_cap);
    write_text_file(
        args.graph_stats_out,
        graph_stats_json(mode, g.num_vertices(), g.num_edges(),
                         cliques.truncated ? args.clique_cap
                                           : cliques.cliques.size(),
                         cliques.truncated)
                .dump(2) +
            "\n");
  }

  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  json stats{{"algorithm", args.algorithm},
             {"mode", to_string(mode)},
             {"num_terms", o.num_terms()},
             {"num_groups", cover->num_groups()},
             {"is_partition", cover->is_partition()},
             {"wall_time_s", elapsed.count()},
             {"out", args.out}};
  if (has_optimality) stats["optimal"] = optimal;
  std::cout << stats.dump(2) << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string hamiltonian;
  std::string cover_path;
  bool do_maximalize = false;
  bool do_cliffordize = false;
  std::string dist = "l2";
  bool known_variance = false;
  std::string alloc;  // empty | uniform | l2 | dist | counts
  std::size_t target = 0;
  std::string state_path;
  std::string save_state_path;
  double epsilon = 0.0016;
  double delta = 0.05;
  double tol = 1e-8;
  std::string out;
};

int run_evaluate(const EvaluateArgs& args) {
  const PauliSum o = parse_pauli_sum(read_text_file(args.hamiltonian));
  GroupCover cover =
      cover_from_json(json::parse(read_text_file(args.cover_path)), o);

  if (args.do_cliffordize) {
    cover = cliffordize(cover, build_graph(o, CommutationMode::FC));
  } else if (args.do_maximalize) {
    cover = maximalize(cover, build_graph(o, cover.mode()));
  }
  validate_cover(cover, build_graph(o, cover.mode()),
                 /*require_coverage=*/false);

  StateVector psi;
  json state_info;
  if (!args.state_path.empty()) {
    psi = load_statevector(args.state_path);
    if (num_qubits_of(psi) != o.num_qubits()) {
      throw PreconditionError("statevector qubit count does not match");
    }
    state_info = {{"n", o.num_qubits()},
                  {"source", args.state_path},
                  {"energy", pauli_sum_expectation(psi, o)},
                  {"sha256", statevector_sha256(psi)}};
  } else {
    const GroundStateResult gs = ground_state(o, args.tol);
    psi = gs.state;
    state_info = {{"n", o.num_qubits()},
                  {"source", "eigensolver"},
                  {"energy", gs.energy},
                  {"residual", gs.residual},
                  {"degenerate_hint", gs.degenerate_hint},
                  {"sha256", statevector_sha256(psi)}};
  }
  if (!args.save_state_path.empty()) {
    save_statevector(args.save_state_path, psi);
    state_info["path"] =
        std::filesystem::absolute(args.save_state_path).string();
  }
  const CovarianceTable table = covariance_table(psi, cover, o);

  std::vector<double> weights;
  if (args.known_variance) {
    weights.resize(o.num_terms());
    for (std::size_t v = 0; v < o.num_terms(); ++v) {
      const double mu = table.mean(v);
      weights[v] = 1.0 - mu * mu;  // Var(X_P) for a +-1-valued outcome
    }
  }

  json scheme;
  std::optional<Distribution> dist;
  if (args.dist == "uniform") {
    dist = uniform_distribution(cover);
  } else if (args.dist == "l1") {
    dist = l1_distribution(cover, o);
  } else if (args.dist == "l2") {
    dist = l2_distribution(cover, o);
  } else if (args.dist == "opt") {
    OptimizeOptions options;
    options.tol = args.tol;
    const OptimizeResult result =
        optimize_distribution(cover, o, weights, std::nullopt, options);
    dist = Distribution(cover, result.pi, "opt");
    scheme["objective"] = result.objective;
    scheme["certificate_gap"] = result.certificate_gap;
    scheme["converged"] = result.converged;
    scheme["iterations"] = result.iterations;
  } else {
    throw ParseError("unknown distribution '" + args.dist + "'");
  }
  if (args.known_variance && args.dist != "opt") {
    std::cerr << "warning: --known-variance only affects --dist opt\n";
  }
  scheme["distribution"] = dist->name();
  scheme["pi"] = dist->pi();
  scheme["known_variance_weights"] = args.known_variance;

  SchemeEvaluation evaluation;
  if (!args.alloc.empty()) {
    std::optional<Allocation> alloc;
    if (args.alloc == "counts") {
      alloc = allocation_from_multiplicities(cover);
    } else {
      if (args.target == 0) {
        throw PreconditionError("--alloc needs --target N");
      }
      if (args.alloc == "uniform") {
        alloc = deterministic_allocation(cover, uniform_distribution(cover),
                                         args.target);
      } else if (args.alloc == "l2") {
        alloc = deterministic_allocation(cover, l2_distribution(cover, o),
                                         args.target);
      } else if (args.alloc == "dist") {
        alloc = deterministic_allocation(cover, *dist, args.target);
      } else {
        throw ParseError("unknown allocation '" + args.alloc + "'");
      }
    }
    scheme["type"] = "deterministic";
    scheme["allocation"] = alloc->name();
    scheme["counts"] = alloc->counts();
    scheme["total_shots"] = alloc->total();
    evaluation = evaluate_det_scheme(cover, *alloc, o, table,
                                     /*partial_coverage=*/true);
  } else {
    scheme["type"] = "horvitz-thompson";
    if (!dist->unbiased()) {
      throw PreconditionError(
          "cover leaves terms unsampled; a Horvitz-Thompson scheme would be "
          "biased");
    }
    evaluation = evaluate_ht_scheme(cover, *dist, o, table);
  }

  json doc{
      {"format_version", kFormatVersion},
      {"kind", "report"},
      {"generated_at", utc_timestamp()},
      {"hamiltonian",
       {{"path", std::filesystem::absolute(args.hamiltonian).string()},
        {"num_qubits", o.num_qubits()},
        {"num_terms", o.num_terms()},
        {"identity_offset", o.identity_offset()}}},
      {"cover", cover_to_json(cover, o)},
      {"state", state_info},
      {"scheme", scheme},
      {"evaluation",
       {{"estimator", evaluation.estimator},
        {"variance", evaluation.variance},
        {"comparison_variance", evaluation.comparison_variance},
        {"bias", evaluation.bias},
        {"mse", evaluation.mse},
        {"clt",
         {{"epsilon", args.epsilon},
          {"delta", args.delta},
          {"shots",
           clt_shots(evaluation.comparison_variance, args.epsilon,
                     args.delta)}}}}}};
  if (!args.state_path.empty()) {
    doc["state"]["path"] = std::filesystem::absolute(args.state_path).string();
  }
  write_text_file(args.out, doc.dump(2) + "\n");
  std::cout << json{{"variance", evaluation.variance},
                    {"comparison_variance", evaluation.comparison_variance},
                    {"bias", evaluation.bias},
                    {"out", args.out}}
                   .dump(2)
            << "\n";
  return 0;
}

struct SimulateArgs {
  std::string report_path;
  std::size_t shots = 0;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  double epsilon = 0.0016;
  std::string out;
  std::string csv_dir;
};

int run_simulate(const SimulateArgs& args) {
  json report;
  try {
    report = json::parse(read_text_file(args.report_path));
  } catch (const json::exception& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!report.contains("kind") || report["kind"] != "report" ||
      !report.contains("scheme") || !report.contains("cover") ||
      !report.contains("hamiltonian") || !report.contains("state")) {
    throw ParseError("report file does not match the report schema");
  }

  const PauliSum o = parse_pauli_sum(
      read_text_file(report["hamiltonian"]["path"].get<std::string>()));
  const GroupCover cover = cover_from_json(report["cover"], o);

  StateVector psi;
  if (report["state"].contains("path")) {
    psi = load_statevector(report["state"]["path"].get<std::string>());
  } else {
    psi = ground_state(o).state;
  }
  const double truth = pauli_sum_expectation(psi, o);
  const double reported_energy = report["state"]["energy"].get<double>();
  if (std::abs(truth - reported_energy) > 1e-6) {
    throw PreconditionError(
        "reconstructed state disagrees with the report's energy");
  }

  const json& scheme = report["scheme"];
  ExperimentConfig config;
  config.shots = args.shots;
  config.repetitions = args.reps;
  config.truth = truth;
  config.epsilon = args.epsilon;
  config.master_seed = args.seed;

  std::vector<double> estimates;
  double predicted_variance_per_estimate = 0.0;
  if (scheme["type"] == "horvitz-thompson") {
    if (args.shots == 0) throw PreconditionError("--shots is required");
    Distribution dist(cover, scheme["pi"].get<std::vector<double>>(),
                      scheme["distribution"].get<std::string>());
    estimates = run_ht_experiment(config, cover, dist, o, psi);
    predicted_variance_per_estimate =
        report["evaluation"]["variance"].get<double>() /
        static_cast<double>(args.shots);
  } else {
    Allocation alloc(cover, scheme["counts"].get<std::vector<std::size_t>>(),
                     scheme["allocation"].get<std::string>());
    config.shots = alloc.total();
    estimates = run_det_experiment(config, cover, alloc, o, psi);
    predicted_variance_per_estimate =
        report["evaluation"]["variance"].get<double>();
  }

  const SuccessRate success =
      success_rate(estimates, truth, args.epsilon, 1000,
                   derive_seed(args.seed, 0x626f6f74));
  const auto [mean, sample_variance] = estimate_moments(estimates);
  // Spread statistics need at least two repetitions.
  const double variance_std =
      estimates.size() >= 2
          ? bootstrap_variance_std(estimates, 1000,
                                   derive_seed(args.seed, 0x76617273))
          : 0.0;
  const auto qq =
      estimates.size() >= 2
          ? qq_data(estimates, truth, predicted_variance_per_estimate)
          : std::vector<std::pair<double, double>>{};

  std::filesystem::path csv_dir = args.csv_dir.empty()
                                      ? std::filesystem::path(args.out)
                                            .parent_path()
                                      : std::filesystem::path(args.csv_dir);
  if (csv_dir.empty()) csv_dir = ".";
  std::filesystem::create_directories(csv_dir);
  const auto stem = std::filesystem::path(args.out).stem().string();
  const auto estimates_path = csv_dir / (stem + "_estimates.csv");
  const auto qq_path = csv_dir / (stem + "_qq.csv");
  write_text_file(estimates_path, estimates_csv(estimates));
  write_text_file(qq_path, qq_csv(qq));

  json doc{{"format_version", kFormatVersion},
           {"kind", "run"},
           {"generated_at", utc_timestamp()},
           {"config",
            {{"report", std::filesystem::absolute(args.report_path).string()},
             {"shots", config.shots},
             {"repetitions", args.reps},
             {"seed", args.seed},
             {"epsilon", args.epsilon}}},
           {"truth", truth},
           {"success_rate", success.rate},
           {"bootstrap_std", success.bootstrap_std},
           {"estimates",
            {{"mean", mean},
             {"sample_variance", sample_variance},
             {"variance_bootstrap_std", variance_std},
             {"predicted_variance", predicted_variance_per_estimate}}},
           {"csv",
            {{"estimates", estimates_path.string()},
             {"qq", qq_path.string()}}}};
  write_text_file(args.out, doc.dump(2) + "\n");
  std::cout << json{{"success_rate", success.rate},
                    {"bootstrap_std", success.bootstrap_std},
                    {"out", args.out}}
                   .dump(2)
            << "\n";
  return 0;
}

struct ImportArgs {
  std::string hamiltonian;
  std::string schedule;
  bool do_cliffordize = false;
  std::string out;
};

int run_import(const ImportArgs& args) {
  const PauliSum o = parse_pauli_sum(read_text_file(args.hamiltonian));
  const ImportedSchedule imported =
      import_schedule(read_text_file(args.schedule), o);

  if (!imported.empty_groups.empty()) {
    std::cerr << "warning: " << imported.empty_groups.size()
              << " setting(s) measure no term of the observable\n";
  }
  if (!imported.uncovered_vertices.empty()) {
    std::cerr << "warning: " << imported.uncovered_vertices.size()
              << " term(s) are never measured by this schedule\n";
  }

  GroupCover cover = imported.cover;
  if (args.do_cliffordize) {
    cover = cliffordize(cover, build_graph(o, CommutationMode::FC));
  }

  json doc = cover_to_json(cover, o);
  doc["generated_at"] = utc_timestamp();
  doc["settings"] = imported.settings;
  doc["setting_order"] = imported.setting_order;
  write_text_file(args.out, doc.dump(2) + "\n");

  std::cout << json{{"settings", imported.settings.size()},
                    {"groups", cover.num_groups()},
                    {"empty_groups", imported.empty_groups.size()},
                    {"uncovered_terms", imported.uncovered_vertices.size()},
                    {"out", args.out}}
                   .dump(2)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Measurement grouping, shot allocation, and exact estimator-variance "
      "evaluation for Pauli-sum observables"};
  app.require_subcommand(1);

  GroupArgs group_args;
  auto* group = app.add_subcommand("group", "build a grouping of a Hamiltonian");
  group->add_option("--hamiltonian", group_args.hamiltonian)->required();
  group->add_option("--mode", group_args.mode)
      ->check(CLI::IsMember({"qwc", "fc"}));
  group->add_option("--algorithm", group_args.algorithm)
      ->required()
      ->check(CLI::IsMember({"ldf", "rlf", "gsc", "ilp", "cg", "ldvf", "lvf"}));
  group->add_option("--time-limit", group_args.time_limit,
                    "seconds for ilp/cg solvers");
  group->add_option("--pricing", group_args.pricing)
      ->check(CLI::IsMember({"greedy", "exact"}));
  group->add_option("--clique-cap", group_args.clique_cap);
  group->add_option("--out", group_args.out)->required();
  group->add_option("--graph-stats", group_args.graph_stats_out,
                    "also write a graph statistics report");

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "evaluate a scheme exactly");
  evaluate->add_option("--hamiltonian", eval_args.hamiltonian)->required();
  evaluate->add_option("--cover", eval_args.cover_path)->required();
  auto* flag_max = evaluate->add_flag("--maximalize", eval_args.do_maximalize);
  evaluate->add_flag("--cliffordize", eval_args.do_cliffordize)
      ->excludes(flag_max);
  evaluate->add_option("--dist", eval_args.dist)
      ->check(CLI::IsMember({"uniform", "l1", "l2", "opt"}));
  evaluate->add_flag("--known-variance", eval_args.known_variance);
  evaluate->add_option("--alloc", eval_args.alloc)
      ->check(CLI::IsMember({"uniform", "l2", "dist", "counts"}));
  evaluate->add_option("--target", eval_args.target);
  evaluate->add_option("--state", eval_args.state_path);
  evaluate->add_option("--save-state", eval_args.save_state_path,
                       "store the statevector for later --state reuse");
  evaluate->add_option("--epsilon", eval_args.epsilon);
  evaluate->add_option("--delta", eval_args.delta);
  evaluate->add_option("--tol", eval_args.tol);
  evaluate->add_option("--out", eval_args.out)->required();

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo validation");
  simulate->add_option("--report", sim_args.report_path)->required();
  simulate->add_option("--shots", sim_args.shots);
  simulate->add_option("--reps", sim_args.reps);
  simulate->add_option("--seed", sim_args.seed);
  simulate->add_option("--epsilon", sim_args.epsilon);
  simulate->add_option("--out", sim_args.out)->required();
  simulate->add_option("--csv-dir", sim_args.csv_dir);

  ImportArgs import_args;
  auto* import =
      app.add_subcommand("import-schedule", "import an external schedule");
  import->add_option("--hamiltonian", import_args.hamiltonian)->required();
  import->add_option("--schedule", import_args.schedule)->required();
  import->add_flag("--cliffordize", import_args.do_cliffordize);
  import->add_option("--out", import_args.out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (group->parsed()) return run_group(group_args);
    if (evaluate->parsed()) return run_evaluate(eval_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (import->parsed()) return run_import(import_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
