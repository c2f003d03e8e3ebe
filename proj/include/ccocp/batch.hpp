#pragma once

#include "ccocp/warm_start.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ccocp {

struct RunConfig {
  std::string problem = "ex1";
  std::string guess = "III";
  KernelFamily kernel = KernelFamily::epanechnikov;        // target kernel
  KernelFamily start_kernel = KernelFamily::split_bernstein;
  bool warm_start = true;
  double w = 100.0;
  double phi = 5e-5;
  int full_samples = 50000;
  std::vector<int> subset_sizes;  // empty: standard {2000, 10000, full}
  int runs = 20;
  std::uint64_t base_seed = 20260810;
  int mesh_iters = -1;  // -1 unlimited
  double mesh_tol = 1e-6;
  int max_nlp_iterations = 500;
  int validate_mc = 0;  // fresh Monte-Carlo draws per run; 0 disables
  std::string out;
  std::string format = "csv";
  int workers = 1;
};

RunConfig load_config_file(const std::string& path);
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

struct RunRecord {
  int run_index = 0;
  std::uint64_t seed = 0;
  SolveStatus status = SolveStatus::numerical_failure;
  bool converged = false;
  double cost = 0.0;
  double wall_time_s = 0.0;
  int mesh_iterations = 0;
  int final_sample_count = 0;
  std::string kernel;
  double w_start = 1.0;
  std::string guess_label;
  double max_risk_mc = -1.0;  // -1: not validated
};

struct BatchStatistics {
  int runs = 0;
  int converged = 0;       // C
  int higher_cost = 0;     // H
  double mu_T = 0.0, T_min = 0.0, T_max = 0.0;
  double mu_J = 0.0, sigma_J = 0.0;
  double cluster_threshold = 0.0;
  std::vector<RunRecord> records;
};

struct CostClusters {
  double threshold = 0.0;
  std::vector<int> labels;  // 0 = low cluster, 1 = high cluster
  int high_count = 0;
};

// Splits converged costs at the largest adjacent relative gap when that gap
// exceeds 1%; runs above the split count as higher-cost solutions.
CostClusters cluster_costs(const std::vector<double>& costs);

BatchStatistics run_batch(const RunConfig& config);
CampaignOptions campaign_options_from(const RunConfig& config, bool has_chance);

void emit_results_csv(const BatchStatistics& stats, const std::string& path);
void emit_results_json(const BatchStatistics& stats, const RunConfig& config,
                       const std::string& path);

// Plot data: t, states, controls, Lagrange-interpolated at 100 points per
// mesh interval.
void emit_trajectory(const Trajectory& traj, const std::string& path);

std::string format_statistics(const BatchStatistics& stats);

}  // namespace ccocp
