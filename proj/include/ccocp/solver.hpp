#pragma once

#include "ccocp/transcription.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace ccocp {

struct SolveOptions {
  // Total budget of inner quasi-Newton iterations across all outer
  // augmented-Lagrangian updates. Each inner iteration performs one sparse
  // Jacobian evaluation plus a line search, which is the closest analogue
  // of one major iteration of the external solvers this interface can host.
  int max_iterations = 500;
  double feasibility_tol = 1e-6;
  double optimality_tol = 1e-5;
  // Central-difference step scale; per-variable step is fd_step * (1+|x_i|).
  double fd_step = 6.0e-6;
  bool scaling = true;
  bool perturb_start = false;
  double perturb_amount = 1e-3;
  std::uint64_t perturb_seed = 0;

  int lbfgs_memory = 8;
  int max_outer = 40;
  double rho_init = 10.0;
  double rho_mult = 10.0;
  double rho_max = 1e9;
};

enum class SolveStatus { converged, iteration_limit, infeasible, numerical_failure };

std::string status_name(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::numerical_failure;
  Eigen::VectorXd solution;
  double objective = 0.0;
  double max_violation = 0.0;
  double projected_gradient_norm = 0.0;
  int iterations = 0;
  double wall_time_s = 0.0;
};

// Built-in reference solver: augmented Lagrangian over slack-completed
// equality residuals, bound-projected L-BFGS inner iterations, sparse
// central finite-difference derivatives. Any external solver adapter must
// honor the same (nlp, x0, opts) -> SolveReport contract and status
// semantics.
SolveReport solve(const NlpProblem& nlp, Eigen::Ref<const Eigen::VectorXd> x0,
                  const SolveOptions& opts = {});

using SolverFn = std::function<SolveReport(const NlpProblem&, Eigen::Ref<const Eigen::VectorXd>,
                                           const SolveOptions&)>;

// Column-compressed sparse Jacobian produced by grouped central differences.
struct SparseJacobian {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::pair<int, double>>> col_entries;  // (row, value) per column

  Eigen::MatrixXd dense() const;
};

// Central finite-difference Jacobian restricted to the declared sparsity;
// structurally independent columns are grouped so they share evaluations.
SparseJacobian jacobian_fd(const NlpProblem& nlp, Eigen::Ref<const Eigen::VectorXd> x,
                           double step);

// Greedy grouping of columns such that no two columns in a group touch the
// same row (exposed for tests).
std::vector<int> color_columns(const std::vector<std::vector<int>>& row_cols, int num_vars);

}  // namespace ccocp
