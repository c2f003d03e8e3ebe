#include "ccocp/warm_start.hpp"

#include "ccocp/problems.hpp"

#include <chrono>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ccocp {

StageDirective current_stage(const WarmStartSchedule& schedule) {
  StageDirective d;
  if (schedule.subsets.sizes.empty())
    throw std::invalid_argument("warm start schedule has an empty subset schedule");
  if (!schedule.triggered) {
    d.kernel = schedule.start_kernel;
    d.w = schedule.w_start;
    d.sample_count = schedule.subsets.sizes.front();
    d.stage_index = 0;
  } else {
    const int last = static_cast<int>(schedule.subsets.sizes.size()) - 1;
    const int idx = std::min(schedule.stage, last);
    d.kernel = schedule.target_kernel;
    d.w = 1.0;
    d.sample_count = schedule.subsets.sizes[idx];
    d.stage_index = idx;
  }
  return d;
}

StageDirective next_stage(WarmStartSchedule& schedule, double mesh_error) {
  const StageDirective before = current_stage(schedule);
  if (!schedule.triggered) {
    if (mesh_error < schedule.phi) {
      schedule.triggered = true;
      schedule.stage = std::min<int>(1, static_cast<int>(schedule.subsets.sizes.size()) - 1);
    }
  } else {
    schedule.stage = std::min<int>(schedule.stage + 1,
                                   static_cast<int>(schedule.subsets.sizes.size()) - 1);
  }
  StageDirective d = current_stage(schedule);
  d.recompute_bandwidth = d.sample_count != before.sample_count;
  return d;
}

namespace {

int count_chance_slots(const OcpProblem& problem) {
  int total = 0;
  for (const auto& ph : problem.phases) total += static_cast<int>(ph.chance_constraints.size());
  return total;
}

// Bandwidths for every chance slot from the probe samples of the given
// subset size (prefix of the full set).
std::vector<double> slot_bandwidths(const OcpProblem& problem, const SampleSet& samples,
                                    int n_use) {
  std::vector<double> h;
  for (const auto& ph : problem.phases) {
    for (const auto& cc : ph.chance_constraints) {
      const Eigen::VectorXd psi = bandwidth_probe_samples(cc, samples.samples, n_use);
      h.push_back(bandwidth_normal_reference(psi));
    }
  }
  return h;
}

}  // namespace

SolveCampaignReport run_warm_started(const OcpProblem& problem, const CampaignOptions& opts,
                                     std::uint64_t seed) {
  const auto t_begin = std::chrono::steady_clock::now();
  SolveCampaignReport report;
  report.seed = seed;

  const int total_cc = count_chance_slots(problem);
  const bool has_chance = total_cc > 0;

  WarmStartSchedule schedule = opts.schedule;
  if (has_chance && opts.warm_start) {
    if (!(schedule.w_start >= 1.0))
      throw std::invalid_argument("warm start: w_start must be >= 1");
    if (!(schedule.phi > 0.0)) throw std::invalid_argument("warm start: phi must be positive");
    if (!schedule.target_kernel.conforming)
      throw std::invalid_argument("warm start: the target kernel must be conforming");
    if (schedule.subsets.sizes.empty())
      schedule.subsets = SubsetSchedule::standard(opts.full_samples);
    if (schedule.subsets.sizes.back() != opts.full_samples)
      throw std::invalid_argument("warm start: subset schedule must end at the full sample count");
    for (std::size_t i = 1; i < schedule.subsets.sizes.size(); ++i)
      if (schedule.subsets.sizes[i] <= schedule.subsets.sizes[i - 1])
        throw std::invalid_argument("warm start: subset schedule must be strictly increasing");
  }

  SampleSet samples;
  std::map<int, std::vector<double>> h_cache;
  if (has_chance) {
    if (opts.noise.dim() < 2)
      throw std::invalid_argument("campaign: chance constraints need a 2d noise model");
    samples = draw_normal(opts.noise, opts.full_samples, seed);
  }

  std::vector<Mesh> meshes(problem.num_phases(),
                           uniform_mesh(opts.refinement.initial_intervals,
                                        opts.refinement.initial_degree));
  std::vector<InitialGuess> guesses = problem.guess;

  const int max_refines = opts.mesh_iteration_cap >= 0 ? opts.mesh_iteration_cap
                                                       : opts.refinement.max_iterations;
  const bool capped = opts.mesh_iteration_cap >= 0;

  int refines_done = 0;
  bool all_solves_converged = true;
  for (int iter = 0;; ++iter) {
    StageDirective directive;
    directive.sample_count = 0;
    ChanceEvalConfig cfg;
    if (has_chance) {
      if (opts.warm_start) {
        directive = current_stage(schedule);
      } else {
        directive.kernel = opts.kernel;
        directive.w = 1.0;
        directive.sample_count = opts.full_samples;
        directive.stage_index = 0;
      }
      auto it = h_cache.find(directive.sample_count);
      if (it == h_cache.end())
        it = h_cache.emplace(directive.sample_count,
                             slot_bandwidths(problem, samples, directive.sample_count)).first;
      cfg.samples = &samples.samples;
      cfg.n_use = directive.sample_count;
      cfg.kernel = directive.kernel;
      cfg.w = directive.w;
      cfg.h_base = it->second;
    }

    const NlpProblem nlp = transcribe(problem, meshes, cfg);
    const Eigen::VectorXd x0 = seed_from_guess(nlp, guesses);
    const SolveReport solve_report = solve(nlp, x0, opts.solver);
    const Trajectory traj = extract_trajectory(nlp, solve_report.solution);
    const MeshErrorReport err = estimate_error(traj, problem);

    CampaignIteration row;
    row.iteration = iter;
    row.stage = directive.stage_index;
    row.kernel = has_chance ? kernel_name(directive.kernel.family) : "";
    row.w = directive.w;
    row.sample_count = directive.sample_count;
    row.mesh_error = err.max_error;
    row.cost = solve_report.objective;
    row.status = solve_report.status;
    row.solver_iterations = solve_report.iterations;
    row.wall_time_s = solve_report.wall_time_s;
    int colloc = 0;
    for (const auto& mesh : meshes) colloc += mesh.total_collocation();
    row.total_collocation = colloc;
    report.trace.push_back(row);

    report.final_sample_count = directive.sample_count;
    if (solve_report.status != SolveStatus::converged) {
      all_solves_converged = false;
      report.converged = false;
      report.final_status = solve_report.status;
      std::ostringstream os;
      os << "solver " << status_name(solve_report.status) << " at mesh iteration " << iter;
      report.stop_reason = os.str();
      report.trajectory = traj;
      report.cost = solve_report.objective;
      break;
    }

    report.trajectory = traj;
    report.cost = solve_report.objective;
    report.final_status = SolveStatus::converged;

    const bool samples_complete =
        !has_chance || directive.sample_count >= opts.full_samples;
    const bool spatially_converged = err.max_error <= opts.refinement.mesh_tol;

    if (spatially_converged && samples_complete) {
      report.converged = true;
      report.stop_reason = "mesh tolerance reached on the full sample set";
      break;
    }
    if (refines_done >= max_refines) {
      // Capped protocols count a run as converged when every NLP solve
      // converged and the sample schedule completed; unlimited runs must
      // also meet the mesh tolerance.
      report.converged = capped && all_solves_converged && samples_complete;
      report.stop_reason = capped ? "mesh iteration cap reached"
                                  : "mesh tolerance not reached within the iteration limit";
      break;
    }

    if (has_chance && opts.warm_start) next_stage(schedule, err.max_error);
    const std::vector<Mesh> new_meshes = refine_all(meshes, err, opts.refinement);
    guesses = interpolate_solution(traj, new_meshes);
    meshes = new_meshes;
    ++refines_done;
  }

  report.mesh_iterations = refines_done;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return report;
}

TuneResult tune_w(const OcpProblem& problem, const std::vector<TuneCandidate>& candidates,
                  const CampaignOptions& base_opts, const TrialProtocol& protocol) {
  if (candidates.empty()) throw std::invalid_argument("tune_w: no candidates supplied");
  TuneResult result;
  result.converged_counts.assign(candidates.size(), 0);
  result.attempted_runs.assign(candidates.size(), 0);

  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const TuneCandidate& cand = candidates[ci];
    CampaignOptions opts = base_opts;
    opts.warm_start = true;
    opts.mesh_iteration_cap = protocol.mesh_iterations;
    opts.full_samples = protocol.samples;
    opts.schedule.w_start = cand.w;
    opts.schedule.start_kernel = cand.kernel;
    opts.schedule.target_kernel = cand.kernel.conforming
                                      ? cand.kernel
                                      : KernelSpec::make(KernelFamily::epanechnikov);
    // Trials stay on the starting stage: an unreachably small phi keeps the
    // trigger from firing, and the trial subset is the whole trial set.
    opts.schedule.phi = 1e-300;
    opts.schedule.subsets.sizes = {protocol.samples};
    opts.schedule.triggered = false;
    opts.schedule.stage = 0;

    bool all_ok = true;
    for (int run = 0; run < protocol.runs; ++run) {
      ++result.attempted_runs[ci];
      const SolveCampaignReport rep =
          run_warm_started(problem, opts, protocol.base_seed + static_cast<std::uint64_t>(run));
      bool run_ok = !rep.trace.empty();
      for (const auto& row : rep.trace)
        if (row.status != SolveStatus::converged) run_ok = false;
      if (run_ok) {
        ++result.converged_counts[ci];
      } else {
        all_ok = false;
        break;  // terminate the trial batch at the first nonconvergence
      }
    }
    if (all_ok) {
      result.success = true;
      result.chosen = cand;
      return result;
    }
  }
  return result;
}

}  // namespace ccocp
