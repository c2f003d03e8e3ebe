#include "ccocp/batch.hpp"

#include "ccocp/problems.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccocp {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string kernel_report_name(const KernelSpec& spec) {
  std::string name = kernel_name(spec.family);
  if (spec.surrogate) name += "[surrogate]";
  return name;
}

}  // namespace

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "problem") config.problem = value;
  else if (key == "guess") config.guess = value;
  else if (key == "kernel") config.kernel = kernel_from_name(value);
  else if (key == "start_kernel") config.start_kernel = kernel_from_name(value);
  else if (key == "warm_start") config.warm_start = value == "true" || value == "1" || value == "on";
  else if (key == "w") config.w = std::stod(value);
  else if (key == "phi") config.phi = std::stod(value);
  else if (key == "samples") config.full_samples = std::stoi(value);
  else if (key == "subset_sizes") {
    config.subset_sizes.clear();
    std::istringstream is(value);
    std::string tok;
    while (std::getline(is, tok, ',')) config.subset_sizes.push_back(std::stoi(trim(tok)));
  } else if (key == "runs") config.runs = std::stoi(value);
  else if (key == "seed") config.base_seed = std::stoull(value);
  else if (key == "mesh_iters") config.mesh_iters = value == "unlimited" ? -1 : std::stoi(value);
  else if (key == "mesh_tol") config.mesh_tol = std::stod(value);
  else if (key == "nlp_iters") config.max_nlp_iterations = std::stoi(value);
  else if (key == "validate_mc") config.validate_mc = std::stoi(value);
  else if (key == "out") config.out = value;
  else if (key == "format") config.format = value;
  else if (key == "workers") config.workers = std::stoi(value);
  else throw std::invalid_argument("unknown config key: " + key);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  RunConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

CostClusters cluster_costs(const std::vector<double>& costs) {
  CostClusters result;
  result.labels.assign(costs.size(), 0);
  if (costs.empty()) return result;

  std::vector<double> sorted = costs;
  std::sort(sorted.begin(), sorted.end());
  double best_gap = 0.0;
  std::size_t split = 0;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const double rel = (sorted[i + 1] - sorted[i]) / std::max(std::abs(sorted[i]), 1e-12);
    if (rel > best_gap) {
      best_gap = rel;
      split = i;
    }
  }
  if (best_gap <= 0.01) {
    result.threshold = std::numeric_limits<double>::infinity();
    return result;
  }
  result.threshold = 0.5 * (sorted[split] + sorted[split + 1]);
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (costs[i] > result.threshold) {
      result.labels[i] = 1;
      ++result.high_count;
    }
  }
  return result;
}

CampaignOptions campaign_options_from(const RunConfig& config, bool has_chance) {
  CampaignOptions opts;
  opts.solver.max_iterations = config.max_nlp_iterations;
  opts.refinement.mesh_tol = config.mesh_tol;
  opts.mesh_iteration_cap = config.mesh_iters;
  opts.full_samples = config.full_samples;
  opts.warm_start = config.warm_start && has_chance;
  opts.kernel = KernelSpec::make(config.kernel);
  if (opts.warm_start) {
    opts.schedule.w_start = config.w;
    opts.schedule.phi = config.phi;
    opts.schedule.start_kernel = KernelSpec::make(config.start_kernel);
    opts.schedule.target_kernel = KernelSpec::make(config.kernel);
    if (config.subset_sizes.empty()) {
      opts.schedule.subsets = SubsetSchedule::standard(config.full_samples);
    } else {
      opts.schedule.subsets.sizes = config.subset_sizes;
      if (opts.schedule.subsets.sizes.back() != config.full_samples)
        opts.schedule.subsets.sizes.push_back(config.full_samples);
    }
  }
  return opts;
}

BatchStatistics run_batch(const RunConfig& config) {
  const ProblemBundle bundle = make_problem(config.problem, config.guess);
  CampaignOptions opts = campaign_options_from(config, bundle.has_chance);
  opts.noise = bundle.noise;

  BatchStatistics stats;
  stats.runs = config.runs;
  stats.records.resize(config.runs);

  int workers = std::max(1, config.workers);
#ifdef _OPENMP
  workers = std::min(workers, omp_get_max_threads());
#pragma omp parallel for schedule(dynamic) num_threads(workers) if (workers > 1)
#endif
  for (int run = 0; run < config.runs; ++run) {
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(run);
    RunRecord rec;
    rec.run_index = run;
    rec.seed = seed;
    rec.kernel = bundle.has_chance ? kernel_report_name(KernelSpec::make(config.kernel)) : "";
    rec.w_start = config.warm_start && bundle.has_chance ? config.w : 1.0;
    rec.guess_label = config.guess;
    try {
      const SolveCampaignReport rep = run_warm_started(bundle.problem, opts, seed);
      // A campaign whose solves all converged but whose refinement or
      // sample schedule did not complete is recorded as an iteration limit.
      rec.status = rep.converged ? SolveStatus::converged
                                 : (rep.final_status == SolveStatus::converged
                                        ? SolveStatus::iteration_limit
                                        : rep.final_status);
      rec.converged = rep.converged;
      rec.cost = rep.cost;
      rec.wall_time_s = rep.wall_time_s;
      rec.mesh_iterations = rep.mesh_iterations;
      rec.final_sample_count = rep.final_sample_count;
      if (rec.converged && bundle.has_chance && config.validate_mc > 0) {
        const auto& spec = bundle.problem.phases.front().chance_constraints.front();
        rec.max_risk_mc = validate_risk(rep.trajectory, spec, bundle.noise, seed + 777777u,
                                        config.validate_mc);
      }
    } catch (const std::exception&) {
      rec.status = SolveStatus::numerical_failure;
      rec.converged = false;
    }
    stats.records[run] = rec;
  }

  std::vector<double> costs, times;
  for (const auto& rec : stats.records) {
    if (!rec.converged) continue;
    ++stats.converged;
    costs.push_back(rec.cost);
    times.push_back(rec.wall_time_s);
  }
  if (!times.empty()) {
    stats.mu_T = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
    stats.T_min = *std::min_element(times.begin(), times.end());
    stats.T_max = *std::max_element(times.begin(), times.end());
  }
  if (!costs.empty()) {
    stats.mu_J = std::accumulate(costs.begin(), costs.end(), 0.0) / costs.size();
    double sq = 0.0;
    for (double c : costs) sq += (c - stats.mu_J) * (c - stats.mu_J);
    stats.sigma_J = costs.size() > 1 ? std::sqrt(sq / (costs.size() - 1)) : 0.0;
    const CostClusters clusters = cluster_costs(costs);
    stats.higher_cost = clusters.high_count;
    stats.cluster_threshold = clusters.threshold;
  }
  return stats;
}

namespace {

std::string csv_cost(const RunRecord& rec) {
  if (!rec.converged) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", rec.cost);
  return buf;
}

}  // namespace

void emit_results_csv(const BatchStatistics& stats, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_results_csv: cannot open " + path);
  out << "run_index,seed,status,cost,wall_time_s,mesh_iterations,final_sample_count,"
         "kernel,w_start,guess_label,max_risk_mc\n";
  for (const auto& rec : stats.records) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.6f", rec.wall_time_s);
    out << rec.run_index << ',' << rec.seed << ',' << status_name(rec.status) << ','
        << csv_cost(rec) << ',' << wall << ',' << rec.mesh_iterations << ','
        << rec.final_sample_count << ',' << rec.kernel << ',' << rec.w_start << ','
        << rec.guess_label << ',';
    if (rec.max_risk_mc >= 0.0) {
      char risk[32];
      std::snprintf(risk, sizeof risk, "%.6g", rec.max_risk_mc);
      out << risk;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("emit_results_csv: write failed for " + path);
}

void emit_results_json(const BatchStatistics& stats, const RunConfig& config,
                       const std::string& path) {
  nlohmann::json j;
  j["config"] = {{"problem", config.problem},
                 {"guess", config.guess},
                 {"kernel", kernel_name(config.kernel)},
                 {"start_kernel", kernel_name(config.start_kernel)},
                 {"warm_start", config.warm_start},
                 {"w", config.w},
                 {"phi", config.phi},
                 {"samples", config.full_samples},
                 {"runs", config.runs},
                 {"seed", config.base_seed},
                 {"mesh_iters", config.mesh_iters},
                 {"mesh_tol", config.mesh_tol}};
  j["statistics"] = {{"runs", stats.runs},     {"C", stats.converged}, {"H", stats.higher_cost},
                     {"mu_T", stats.mu_T},     {"T_min", stats.T_min}, {"T_max", stats.T_max},
                     {"mu_J", stats.mu_J},     {"sigma_J", stats.sigma_J}};
  j["records"] = nlohmann::json::array();
  for (const auto& rec : stats.records) {
    nlohmann::json r = {{"run_index", rec.run_index},
                        {"seed", rec.seed},
                        {"status", status_name(rec.status)},
                        {"wall_time_s", rec.wall_time_s},
                        {"mesh_iterations", rec.mesh_iterations},
                        {"final_sample_count", rec.final_sample_count},
                        {"kernel", rec.kernel},
                        {"w_start", rec.w_start},
                        {"guess_label", rec.guess_label}};
    if (rec.converged) r["cost"] = rec.cost;
    if (rec.max_risk_mc >= 0.0) r["max_risk_mc"] = rec.max_risk_mc;
    j["records"].push_back(std::move(r));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_results_json: cannot open " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("emit_results_json: write failed for " + path);
}

void emit_trajectory(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_trajectory: cannot open " + path);
  out.precision(12);
  const int ny = traj.phases.empty() ? 0 : static_cast<int>(traj.phases[0].states.cols());
  const int nu = traj.phases.empty() ? 0 : static_cast<int>(traj.phases[0].controls.cols());
  out << "t";
  for (int c = 0; c < ny; ++c) out << ",state" << c;
  for (int c = 0; c < nu; ++c) out << ",control" << c;
  out << '\n';

  constexpr int kPointsPerInterval = 100;
  for (const auto& phase : traj.phases) {
    for (int k = 0; k < phase.mesh.intervals(); ++k) {
      const double lo = phase.mesh.boundaries(k);
      const double hi = phase.mesh.boundaries(k + 1);
      for (int r = 0; r < kPointsPerInterval; ++r) {
        // Half-open sampling keeps the t column strictly increasing across
        // interval and phase boundaries.
        const double tau = lo + (hi - lo) * static_cast<double>(r) / kPointsPerInterval;
        const double t = map_tau_to_t(tau, phase.t0, phase.tf);
        const Eigen::VectorXd y = eval_phase_state(phase, tau);
        const Eigen::VectorXd u = eval_phase_control(phase, tau);
        out << t;
        for (int c = 0; c < ny; ++c) out << ',' << y(c);
        for (int c = 0; c < nu; ++c) out << ',' << u(c);
        out << '\n';
      }
    }
  }
  if (!out) throw std::runtime_error("emit_trajectory: write failed for " + path);
}

std::string format_statistics(const BatchStatistics& stats) {
  std::ostringstream os;
  os << "runs " << stats.runs << "  C " << stats.converged << "  H " << stats.higher_cost
     << "\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "mu_J* %.6f  sigma_J* %.6f\nmu_T %.3fs  T_min %.3fs  T_max %.3fs\n",
                stats.mu_J, stats.sigma_J, stats.mu_T, stats.T_min, stats.T_max);
  os << buf;
  return os.str();
}

}  // namespace ccocp
