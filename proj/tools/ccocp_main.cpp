#include "ccocp/batch.hpp"
#include "ccocp/problems.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>

namespace {

using namespace ccocp;

void add_common_options(CLI::App* cmd, RunConfig& config, std::string& config_path,
                        std::string& kernel_name_opt, std::string& start_kernel_opt,
                        std::string& mesh_iters_opt) {
  cmd->add_option("--config", config_path, "key = value config file; flags override it");
  cmd->add_option("--problem", config.problem, "ex1 | ex1-det | ex2 | ex2-det");
  cmd->add_option("--guess", config.guess, "initial guess label I..IV (ex1)");
  cmd->add_option("--kernel", kernel_name_opt, "target kernel: split_bernstein | epanechnikov | gaussian");
  cmd->add_option("--start-kernel", start_kernel_opt, "warm-start starting kernel");
  cmd->add_option("--warm-start", config.warm_start, "enable the warm-start schedule");
  cmd->add_option("--w", config.w, "starting bandwidth multiplier");
  cmd->add_option("--phi", config.phi, "mesh-error threshold for the kernel/bandwidth switch");
  cmd->add_option("--samples", config.full_samples, "full sample-set size");
  cmd->add_option("--runs", config.runs, "number of runs in a batch");
  cmd->add_option("--seed", config.base_seed, "base seed; run i uses seed + i");
  cmd->add_option("--mesh-iters", mesh_iters_opt, "mesh refinement cap or 'unlimited'");
  cmd->add_option("--mesh-tol", config.mesh_tol, "mesh refinement tolerance");
  cmd->add_option("--nlp-iters", config.max_nlp_iterations, "NLP solver iteration cap");
  cmd->add_option("--validate-mc", config.validate_mc, "fresh Monte-Carlo draws per converged run");
  cmd->add_option("--out", config.out, "output file path");
  cmd->add_option("--format", config.format, "csv | json");
}

void finalize_config(RunConfig& config, const std::string& config_path,
                     const std::string& kernel_opt, const std::string& start_kernel_opt,
                     const std::string& mesh_iters_opt, const CLI::App* cmd) {
  if (!config_path.empty()) {
    RunConfig from_file = load_config_file(config_path);
    // Flags override file values: re-apply only options the user passed.
    RunConfig merged = from_file;
    if (cmd->count("--problem")) merged.problem = config.problem;
    if (cmd->count("--guess")) merged.guess = config.guess;
    if (cmd->count("--warm-start")) merged.warm_start = config.warm_start;
    if (cmd->count("--w")) merged.w = config.w;
    if (cmd->count("--phi")) merged.phi = config.phi;
    if (cmd->count("--samples")) merged.full_samples = config.full_samples;
    if (cmd->count("--runs")) merged.runs = config.runs;
    if (cmd->count("--seed")) merged.base_seed = config.base_seed;
    if (cmd->count("--mesh-tol")) merged.mesh_tol = config.mesh_tol;
    if (cmd->count("--nlp-iters")) merged.max_nlp_iterations = config.max_nlp_iterations;
    if (cmd->count("--validate-mc")) merged.validate_mc = config.validate_mc;
    if (cmd->count("--out")) merged.out = config.out;
    if (cmd->count("--format")) merged.format = config.format;
    config = merged;
  }
  if (!kernel_opt.empty()) config.kernel = kernel_from_name(kernel_opt);
  if (!start_kernel_opt.empty()) config.start_kernel = kernel_from_name(start_kernel_opt);
  if (!mesh_iters_opt.empty())
    config.mesh_iters = mesh_iters_opt == "unlimited" ? -1 : std::stoi(mesh_iters_opt);
  if (const char* env = std::getenv("CCOCP_WORKERS")) config.workers = std::atoi(env);
}

void print_trace(const SolveCampaignReport& rep) {
  std::printf("iter  stage  kernel            w        samples  mesh_error   cost         status\n");
  for (const auto& row : rep.trace) {
    std::printf("%-5d %-6d %-17s %-8g %-8d %-12.4g %-12.6f %s\n", row.iteration, row.stage,
                row.kernel.empty() ? "-" : row.kernel.c_str(), row.w, row.sample_count,
                row.mesh_error, row.cost, status_name(row.status).c_str());
  }
  std::printf("campaign: %s (%s), cost %.6f, %.2fs\n", rep.converged ? "converged" : "nonconverged",
              rep.stop_reason.c_str(), rep.cost, rep.wall_time_s);
}

int do_solve(const RunConfig& config, const std::string& dump_samples) {
  const ProblemBundle bundle = make_problem(config.problem, config.guess);
  CampaignOptions opts = campaign_options_from(config, bundle.has_chance);
  opts.noise = bundle.noise;

  if (!dump_samples.empty() && bundle.has_chance) {
    const SampleSet set = draw_normal(bundle.noise, config.full_samples, config.base_seed);
    save_samples(set, dump_samples);
    std::printf("samples written to %s\n", dump_samples.c_str());
  }

  const SolveCampaignReport rep = run_warm_started(bundle.problem, opts, config.base_seed);
  print_trace(rep);
  if (!config.out.empty()) {
    emit_trajectory(rep.trajectory, config.out);
    std::printf("trajectory written to %s\n", config.out.c_str());
  }
  return 0;
}

int do_batch(const RunConfig& config) {
  const BatchStatistics stats = run_batch(config);
  std::printf("%s", format_statistics(stats).c_str());
  if (!config.out.empty()) {
    if (config.format == "json") emit_results_json(stats, config, config.out);
    else emit_results_csv(stats, config.out);
    std::printf("results written to %s\n", config.out.c_str());
  }
  return 0;
}

int do_tune(const RunConfig& config, const std::string& w_list) {
  const ProblemBundle bundle = make_problem(config.problem, config.guess);
  if (!bundle.has_chance) {
    std::fprintf(stderr, "tune: %s has no chance constraint to tune\n", config.problem.c_str());
    return 1;
  }
  CampaignOptions opts = campaign_options_from(config, true);
  opts.noise = bundle.noise;

  std::vector<TuneCandidate> candidates;
  {
    std::istringstream is(w_list);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      TuneCandidate cand;
      cand.w = std::stod(tok);
      cand.kernel = KernelSpec::make(config.start_kernel);
      candidates.push_back(cand);
    }
  }
  if (candidates.empty()) {
    std::fprintf(stderr, "tune: empty candidate list (--w-list)\n");
    return 1;
  }

  TrialProtocol protocol;
  protocol.runs = config.runs;
  protocol.base_seed = config.base_seed;
  const TuneResult result = tune_w(bundle.problem, candidates, opts, protocol);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::printf("candidate w=%-8g kernel=%-16s converged %d/%d\n", candidates[i].w,
                kernel_name(candidates[i].kernel.family).c_str(), result.converged_counts[i],
                result.attempted_runs[i]);
  }
  if (result.success) {
    std::printf("chosen: w=%g kernel=%s\n", result.chosen.w,
                kernel_name(result.chosen.kernel.family).c_str());
  } else {
    std::printf("no candidate converged on every trial run\n");
  }
  return 0;
}

int do_validate(const RunConfig& config, int mc_samples) {
  const ProblemBundle bundle = make_problem(config.problem, config.guess);
  if (!bundle.has_chance) {
    std::fprintf(stderr, "validate: %s has no chance constraint\n", config.problem.c_str());
    return 1;
  }
  CampaignOptions opts = campaign_options_from(config, true);
  opts.noise = bundle.noise;
  const SolveCampaignReport rep = run_warm_started(bundle.problem, opts, config.base_seed);
  print_trace(rep);
  if (!rep.converged) {
    std::printf("campaign did not converge; risk validation skipped\n");
    return 0;
  }
  const auto& spec = bundle.problem.phases.front().chance_constraints.front();
  const double risk = validate_risk(rep.trajectory, spec, bundle.noise,
                                    config.base_seed + 777777u, mc_samples);
  std::printf("max empirical violation probability over %d fresh draws: %.6g (budget %.6g)\n",
              mc_samples, risk, spec.risk);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chance-constrained optimal control benchmark harness"};
  app.require_subcommand(1);

  RunConfig config;
  std::string config_path, kernel_opt, start_kernel_opt, mesh_iters_opt;
  std::string dump_samples, w_list = "1,10,100";
  int mc_samples = 100000;

  CLI::App* solve_cmd = app.add_subcommand("solve", "run one solve campaign");
  add_common_options(solve_cmd, config, config_path, kernel_opt, start_kernel_opt, mesh_iters_opt);
  solve_cmd->add_option("--dump-samples", dump_samples, "write the run's sample set to a file");

  CLI::App* batch_cmd = app.add_subcommand("batch", "run a seeded batch and aggregate statistics");
  add_common_options(batch_cmd, config, config_path, kernel_opt, start_kernel_opt, mesh_iters_opt);

  CLI::App* tune_cmd = app.add_subcommand("tune", "trial-run the (w, kernel) selection protocol");
  add_common_options(tune_cmd, config, config_path, kernel_opt, start_kernel_opt, mesh_iters_opt);
  tune_cmd->add_option("--w-list", w_list, "comma-separated trial multipliers");

  CLI::App* validate_cmd = app.add_subcommand("validate", "solve then Monte-Carlo check the risk");
  add_common_options(validate_cmd, config, config_path, kernel_opt, start_kernel_opt,
                     mesh_iters_opt);
  validate_cmd->add_option("--mc-samples", mc_samples, "fresh draws for validation");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    finalize_config(config, config_path, kernel_opt, start_kernel_opt, mesh_iters_opt, active);
    if (active == solve_cmd) return do_solve(config, dump_samples);
    if (active == batch_cmd) return do_batch(config);
    if (active == tune_cmd) return do_tune(config, w_list);
    if (active == validate_cmd) return do_validate(config, mc_samples);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
