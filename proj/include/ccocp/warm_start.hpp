#pragma once

#include "ccocp/mesh_refinement.hpp"
#include "ccocp/sampling.hpp"
#include "ccocp/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ccocp {

struct SubsetSchedule {
  std::vector<int> sizes;  // strictly increasing, last entry = full set

  static SubsetSchedule standard(int full) {
    SubsetSchedule s;
    if (full > 10000) s.sizes = {2000, 10000, full};
    else if (full > 2000) s.sizes = {2000, full};
    else s.sizes = {full};
    return s;
  }
};

// Stage machine of the warm-start method: a starting (w, kernel, small
// subset) stage, a one-shot trigger when the mesh error first drops below
// phi (w -> 1, kernel switch, larger subset, fresh bandwidth), then subset
// escalation to the full set on each following iteration.
struct WarmStartSchedule {
  double w_start = 1.0;
  KernelSpec start_kernel = KernelSpec::make(KernelFamily::epanechnikov);
  KernelSpec target_kernel = KernelSpec::make(KernelFamily::epanechnikov);
  double phi = 5e-5;
  SubsetSchedule subsets;
  int stage = 0;
  bool triggered = false;
};

struct StageDirective {
  KernelSpec kernel;
  double w = 1.0;
  int sample_count = 0;
  bool recompute_bandwidth = false;
  int stage_index = 0;
};

StageDirective current_stage(const WarmStartSchedule& schedule);
StageDirective next_stage(WarmStartSchedule& schedule, double mesh_error);

struct CampaignOptions {
  SolveOptions solver;
  RefinementOptions refinement;
  NormalDistributionSpec noise;
  int full_samples = 50000;
  bool warm_start = true;
  WarmStartSchedule schedule;
  // Naive mode (warm_start = false) uses this kernel with w = 1 and the
  // full sample set from the first iteration on.
  KernelSpec kernel = KernelSpec::make(KernelFamily::epanechnikov);
  int mesh_iteration_cap = -1;  // -1: unlimited (refinement.max_iterations)
};

struct CampaignIteration {
  int iteration = 0;
  int stage = 0;
  std::string kernel;
  double w = 1.0;
  int sample_count = 0;
  double mesh_error = 0.0;
  double cost = 0.0;
  SolveStatus status = SolveStatus::numerical_failure;
  int solver_iterations = 0;
  double wall_time_s = 0.0;
  int total_collocation = 0;
};

struct SolveCampaignReport {
  bool converged = false;
  SolveStatus final_status = SolveStatus::numerical_failure;
  std::string stop_reason;
  double cost = 0.0;
  Trajectory trajectory;
  std::vector<CampaignIteration> trace;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  int mesh_iterations = 0;
  int final_sample_count = 0;
};

// One full solve campaign: draw samples, then loop transcription -> NLP
// solve -> mesh-error estimate -> stage update -> hp refinement, carrying
// each solution to the next mesh, until the mesh tolerance is met on the
// full sample set or a cap is hit.
SolveCampaignReport run_warm_started(const OcpProblem& problem, const CampaignOptions& opts,
                                     std::uint64_t seed);

struct TrialProtocol {
  int runs = 10;
  int mesh_iterations = 2;
  int samples = 2000;
  std::uint64_t base_seed = 1;
};

struct TuneCandidate {
  double w = 1.0;
  KernelSpec kernel = KernelSpec::make(KernelFamily::epanechnikov);
};

struct TuneResult {
  bool success = false;
  TuneCandidate chosen;
  std::vector<int> converged_counts;  // per candidate (trial stops at first failure)
  std::vector<int> attempted_runs;
};

// Warm-start step 2: accept the first candidate whose trial batch converges
// on every run; a candidate's trials stop at the first nonconvergence.
TuneResult tune_w(const OcpProblem& problem, const std::vector<TuneCandidate>& candidates,
                  const CampaignOptions& base_opts, const TrialProtocol& protocol);

}  // namespace ccocp
