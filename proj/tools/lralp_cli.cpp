// Command-line front end: exact solves, approximate programs, bound reports,
// cover construction, the queue experiment, and the randomized verification
// campaign. Numeric results go to stdout or --out; diagnostics go to stderr.
//
// Exit codes: 0 success, 1 usage/runtime failure, 2 violated hypotheses
// (e.g. an unstable weight vector), 3 an unbounded relaxed program.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lralp/campaign.hpp"
#include "lralp/io.hpp"
#include "lralp/parallel.hpp"

namespace {

using namespace lralp;

constexpr int kExitHypothesis = 2;
constexpr int kExitUnbounded = 3;

WeightVector weights_from_spec(const std::string& spec, int n_states,
                               bool distribution) {
  if (spec.empty() || spec == "ones" || spec == "uniform") {
    return distribution
               ? WeightVector::Constant(n_states, 1.0 / n_states)
               : WeightVector::Ones(n_states);
  }
  const auto document = io::load_json_file(spec);
  const auto values = document.get<std::vector<double>>();
  require(static_cast<int>(values.size()) == n_states,
          "weight file length does not match the state count");
  WeightVector w(n_states);
  for (int s = 0; s < n_states; ++s) w(s) = values[s];
  return w;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

int run(int argc, char** argv) {
  CLI::App app{"linearly relaxed approximate linear programming toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // --threads may follow the subcommand
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (0 = all cores)");

  std::string mdp_path, basis_path, w_path, cover_path, out_path;
  std::string psi_spec = "ones", c_spec = "uniform";
  bool strict_rewards = false;
  double tol = 1e-9;

  auto* solve_exact_cmd =
      app.add_subcommand("solve-exact", "optimal values and policy");
  solve_exact_cmd->add_option("--mdp", mdp_path, "MDP JSON file")->required();
  solve_exact_cmd->add_option("--out", out_path, "output CSV path");
  solve_exact_cmd->add_option("--tol", tol, "fixed-point residual tolerance");
  solve_exact_cmd->add_flag("--strict-rewards", strict_rewards,
                            "require rewards in [0,1]");

  auto* solve_alp_cmd =
      app.add_subcommand("solve-alp", "approximate program over a basis");
  solve_alp_cmd->add_option("--mdp", mdp_path)->required();
  solve_alp_cmd->add_option("--basis", basis_path)->required();
  solve_alp_cmd->add_option("--c", c_spec,
                            "objective weights: uniform or a JSON array file");
  solve_alp_cmd->add_option("--out", out_path);

  auto* solve_lralp_cmd = app.add_subcommand(
      "solve-lralp", "relaxed approximate program with a reduction matrix");
  solve_lralp_cmd->add_option("--mdp", mdp_path)->required();
  solve_lralp_cmd->add_option("--basis", basis_path)->required();
  solve_lralp_cmd->add_option("--W", w_path, "reduction JSON file")->required();
  solve_lralp_cmd->add_option("--c", c_spec);
  solve_lralp_cmd->add_option("--out", out_path);

  auto* bounds_cmd =
      app.add_subcommand("bounds", "evaluate the relaxation error bound");
  bounds_cmd->add_option("--mdp", mdp_path)->required();
  bounds_cmd->add_option("--basis", basis_path)->required();
  bounds_cmd->add_option("--W", w_path)->required();
  bounds_cmd->add_option("--psi", psi_spec,
                         "weights: ones or a JSON array file");
  bounds_cmd->add_option("--c", c_spec);
  bounds_cmd->add_option("--cover", cover_path,
                         "optional cover JSON to add the deviation bound");
  bounds_cmd->add_option("--out", out_path);

  int budget = 0;
  auto* cover_cmd =
      app.add_subcommand("cover", "greedy conic cover of the feature rows");
  cover_cmd->add_option("--basis", basis_path)->required();
  cover_cmd->add_option("--psi", psi_spec);
  cover_cmd->add_option("--budget", budget,
                        "maximum selected states (0 = all states)");
  cover_cmd->add_option("--out", out_path, "cover JSON path");

  int queue_S = 1000, queue_seeds = 10, queue_k = 4;
  double queue_p = 0.2, queue_alpha = 0.0;
  std::uint64_t base_seed = 1;
  bool undiscounted = false;
  std::string table_path, summary_path;
  auto* queue_cmd = app.add_subcommand(
      "queue-experiment", "three-way policy comparison on the service queue");
  queue_cmd->add_option("--S", queue_S, "number of states");
  queue_cmd->add_option("--seeds", queue_seeds, "constraint-sampling repeats");
  queue_cmd->add_option("--seed", base_seed, "base seed");
  queue_cmd->add_option("--k", queue_k, "polynomial basis size");
  queue_cmd->add_option("--p", queue_p, "arrival probability");
  queue_cmd->add_option("--alpha", queue_alpha, "discount (0 = 1 - 1/S)");
  queue_cmd->add_flag("--undiscounted-lookahead", undiscounted,
                      "score lookahead without the discount factor");
  queue_cmd->add_option("--out-table", table_path, "per-state CSV path");
  queue_cmd->add_option("--out-summary", summary_path, "per-seed CSV path");

  int instances = 200;
  std::uint64_t campaign_seed = 8271828;
  auto* campaign_cmd = app.add_subcommand(
      "verify-campaign", "randomized verification of the error bounds");
  campaign_cmd->add_option("--instances", instances);
  campaign_cmd->add_option("--seed", campaign_seed);

  CLI11_PARSE(app, argc, argv);
  set_max_threads(threads);

  std::ofstream file;
  if (solve_exact_cmd->parsed()) {
    const Mdp mdp = io::mdp_from_json(io::load_json_file(mdp_path));
    if (strict_rewards) mdp.validate(true);
    const ExactSolution solution = solve_exact(mdp, tol);
    const double residual =
        (bellman_operator(mdp, solution.values) - solution.values)
            .cwiseAbs()
            .maxCoeff();
    std::cout << "residual " << io::format_double(residual) << "\n";
    io::write_value_csv(open_output(out_path, file), solution.values,
                        &solution.policy);
    return 0;
  }

  if (solve_alp_cmd->parsed()) {
    const Mdp mdp = io::mdp_from_json(io::load_json_file(mdp_path));
    const BasisMatrix basis =
        io::basis_from_json(io::load_json_file(basis_path));
    const WeightVector c = weights_from_spec(c_spec, mdp.n_states, true);
    const AlpSolution solution = solve_alp(mdp, basis, c);
    std::cout << "objective " << io::format_double(solution.objective)
              << "\n";
    io::write_value_csv(open_output(out_path, file), solution.values);
    return 0;
  }

  if (solve_lralp_cmd->parsed()) {
    const Mdp mdp = io::mdp_from_json(io::load_json_file(mdp_path));
    const BasisMatrix basis =
        io::basis_from_json(io::load_json_file(basis_path));
    const ReductionMatrix reduction = io::reduction_from_json(
        io::load_json_file(w_path), mdp.n_states, mdp.n_actions);
    const WeightVector c = weights_from_spec(c_spec, mdp.n_states, true);
    const LralpSolution solution = solve_lralp(mdp, basis, reduction, c);
    if (solution.status == LpStatus::Unbounded) {
      std::cerr << "error: relaxed program is unbounded; choose a reduction "
                   "whose cone covers the features\n";
      return kExitUnbounded;
    }
    if (solution.status == LpStatus::Infeasible) {
      std::cerr << "error: relaxed program is infeasible\n";
      return 1;
    }
    std::cout << "objective " << io::format_double(solution.objective)
              << "\n";
    io::write_value_csv(open_output(out_path, file), solution.values);
    return 0;
  }

  if (bounds_cmd->parsed()) {
    const Mdp mdp = io::mdp_from_json(io::load_json_file(mdp_path));
    const BasisMatrix basis =
        io::basis_from_json(io::load_json_file(basis_path));
    const ReductionMatrix reduction = io::reduction_from_json(
        io::load_json_file(w_path), mdp.n_states, mdp.n_actions);
    const WeightVector psi = weights_from_spec(psi_spec, mdp.n_states, false);
    const WeightVector c = weights_from_spec(c_spec, mdp.n_states, true);
    BoundReport report = evaluate_error_bound(mdp, basis, reduction, c, psi);
    if (!cover_path.empty()) {
      const ConicCover cover =
          io::cover_from_json(io::load_json_file(cover_path), mdp.n_states);
      report.cover = evaluate_cover_bound(basis, reduction, cover, psi,
                                          solve_exact(mdp).values);
    }
    open_output(out_path, file) << io::bound_report_csv(report);
    return 0;
  }

  if (cover_cmd->parsed()) {
    const BasisMatrix basis =
        io::basis_from_json(io::load_json_file(basis_path));
    const WeightVector psi =
        weights_from_spec(psi_spec, basis.n_states(), false);
    const int effective_budget = budget > 0 ? budget : basis.n_states();
    const GreedyCoverResult result =
        greedy_conic_cover(basis, psi, effective_budget);
    std::cerr << "selected " << result.cover.states.size() << " states, zeta "
              << io::format_double(result.cover.zeta) << ", residual "
              << io::format_double(result.cover.residual_max) << ", uncovered "
              << result.uncovered.size() << "\n";
    auto document = io::cover_to_json(result.cover);
    document["uncovered"] = result.uncovered;
    if (out_path.empty())
      std::cout << document.dump(2) << "\n";
    else
      io::save_json_file(out_path, document);
    return 0;
  }

  if (queue_cmd->parsed()) {
    QueueConfig config = QueueConfig::defaults(queue_S);
    config.arrival_p = queue_p;
    config.basis_k = queue_k;
    config.discount = queue_alpha;
    config.discounted_lookahead = !undiscounted;
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < queue_seeds; ++i) seeds.push_back(base_seed + i);
    const ExperimentResult result = run_experiment(config, seeds);
    std::cerr << "wall " << io::format_double(result.wall_seconds)
              << "s, unbounded spread-anchor programs " << result.unbounded_lra
              << "\n";
    {
      std::ofstream table_file;
      io::write_experiment_table(open_output(table_path, table_file), result);
    }
    {
      std::ofstream summary_file;
      io::write_experiment_summary(open_output(summary_path, summary_file),
                                   result);
    }
    return 0;
  }

  if (campaign_cmd->parsed()) {
    CampaignConfig config;
    config.instances = instances;
    config.seed = campaign_seed;
    const CampaignResult result = run_bound_campaign(config);
    std::cout << "instances " << result.instances << "\n"
              << "bound_violations " << result.bound_violations << "\n"
              << "lemma_violations " << result.lemma_violations << "\n"
              << "infinite_rhs " << result.infinite_rhs << "\n"
              << "uncorrelated_infinite " << result.uncorrelated_infinite
              << "\n"
              << "unsolved_relaxations " << result.unsolved_relaxations << "\n"
              << "cover_instances " << result.cover_instances << "\n"
              << "cover_violations " << result.cover_violations << "\n"
              << "worst_ratio " << io::format_double(result.worst_ratio)
              << "\n";
    return result.all_bounds_hold() && result.cover_violations == 0 ? 0 : 1;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& violation) {
    std::cerr << "error: " << violation.what() << "\n";
    return kExitHypothesis;
  } catch (const lralp::UnboundedProjection& unbounded) {
    std::cerr << "error: " << unbounded.what() << "\n";
    return kExitUnbounded;
  } catch (const std::exception& failure) {
    std::cerr << "error: " << failure.what() << "\n";
    return 1;
  }
}
