#include "ccocp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccocp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_limit: return "iteration_limit";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

std::vector<int> color_columns(const std::vector<std::vector<int>>& row_cols, int num_vars) {
  std::vector<std::vector<int>> col_rows(num_vars);
  for (int r = 0; r < static_cast<int>(row_cols.size()); ++r)
    for (int c : row_cols[r]) col_rows[c].push_back(r);

  std::vector<int> color(num_vars, -1);
  std::vector<int> stamp;  // stamp[c] == j marks color c as taken by a neighbour of j
  for (int j = 0; j < num_vars; ++j) {
    for (int r : col_rows[j]) {
      for (int c2 : row_cols[r]) {
        const int col = color[c2];
        if (col >= 0) {
          if (col >= static_cast<int>(stamp.size())) stamp.resize(col + 1, -1);
          stamp[col] = j;
        }
      }
    }
    int pick = 0;
    while (pick < static_cast<int>(stamp.size()) && stamp[pick] == j) ++pick;
    color[j] = pick;
  }
  return color;
}

Eigen::MatrixXd SparseJacobian::dense() const {
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (const auto& [r, v] : col_entries[j]) full(r, j) = v;
  return full;
}

SparseJacobian jacobian_fd(const NlpProblem& nlp, Eigen::Ref<const Eigen::VectorXd> x,
                           double step) {
  if (!(step > 0.0)) throw std::domain_error("jacobian_fd: step must be positive");
  const int n = nlp.num_vars;
  const int m = nlp.num_cons;

  std::vector<std::vector<int>> col_rows(n);
  for (int r = 0; r < m; ++r)
    for (int c : nlp.row_cols[r]) col_rows[c].push_back(r);

  const std::vector<int> color = color_columns(nlp.row_cols, n);
  const int num_groups = n > 0 ? *std::max_element(color.begin(), color.end()) + 1 : 0;
  std::vector<std::vector<int>> groups(num_groups);
  for (int j = 0; j < n; ++j) groups[color[j]].push_back(j);

  SparseJacobian jac;
  jac.rows = m;
  jac.cols = n;
  jac.col_entries.resize(n);

  Eigen::VectorXd xp = x, xm = x, cp(m), cm(m);
  for (const auto& group : groups) {
    for (int j : group) {
      const double h = step * (1.0 + std::abs(x(j)));
      xp(j) = x(j) + h;
      xm(j) = x(j) - h;
    }
    nlp.constraints(xp, cp);
    nlp.constraints(xm, cm);
    if (!cp.allFinite() || !cm.allFinite())
      throw std::runtime_error("jacobian_fd: non-finite constraint evaluation");
    for (int j : group) {
      const double h = step * (1.0 + std::abs(x(j)));
      for (int r : col_rows[j]) jac.col_entries[j].emplace_back(r, (cp(r) - cm(r)) / (2.0 * h));
      xp(j) = x(j);
      xm(j) = x(j);
    }
  }
  return jac;
}

namespace {

// Internal workspace for one solve. The problem is solved in scaled
// variables z with x = shift + scale .* z, extended by one slack per ranged
// constraint row so every constraint becomes an equality residual
// r_i = c_i(x) - target_i with simple bounds on (z, s).
struct AlWork {
  const NlpProblem* nlp = nullptr;
  SolveOptions opts;
  int n = 0;       // structural variables
  int m = 0;       // constraint rows
  int n_slack = 0;
  int nz = 0;      // n + n_slack

  Eigen::VectorXd scale, shift;
  Eigen::VectorXd lo, hi;          // bounds on the extended z vector
  std::vector<int> slack_of_row;   // -1 for equality rows
  Eigen::VectorXd eq_target;       // equality rows: residual target

  std::vector<std::vector<int>> col_rows;  // per structural column
  std::vector<std::vector<int>> groups;    // FD coloring groups
  std::vector<int> obj_cols;

  long evals = 0;

  double to_x(int j, double zj) const { return shift(j) + scale(j) * zj; }

  void unscale(const Eigen::VectorXd& z, Eigen::VectorXd& x) const {
    for (int j = 0; j < n; ++j) x(j) = shift(j) + scale(j) * z(j);
  }

  double objective(const Eigen::VectorXd& z, Eigen::VectorXd& xbuf) {
    unscale(z, xbuf);
    ++evals;
    return nlp->objective(xbuf);
  }

  void constraints(const Eigen::VectorXd& z, Eigen::VectorXd& xbuf, Eigen::VectorXd& c) {
    unscale(z, xbuf);
    ++evals;
    nlp->constraints(xbuf, c);
  }

  // r_i = c_i - s_i (ranged rows) or c_i - target_i (equality rows)
  void residual(const Eigen::VectorXd& z, const Eigen::VectorXd& c, Eigen::VectorXd& r) const {
    for (int i = 0; i < m; ++i) {
      const int s = slack_of_row[i];
      r(i) = c(i) - (s >= 0 ? z(n + s) : eq_target(i));
    }
  }

  double true_violation(const Eigen::VectorXd& c) const {
    double v = 0.0;
    for (int i = 0; i < m; ++i) {
      v = std::max(v, nlp->con_lo(i) - c(i));
      v = std::max(v, c(i) - nlp->con_hi(i));
    }
    return std::max(v, 0.0);
  }
};

inline void project(const AlWork& w, Eigen::VectorXd& z) {
  for (int i = 0; i < w.nz; ++i) z(i) = std::min(std::max(z(i), w.lo(i)), w.hi(i));
}

// Augmented Lagrangian value at z; returns +inf on non-finite evaluations so
// the line search backs off.
double al_value(AlWork& w, const Eigen::VectorXd& z, double rho, const Eigen::VectorXd& lambda,
                Eigen::VectorXd& xbuf, Eigen::VectorXd& cbuf, Eigen::VectorXd& rbuf) {
  const double f = w.objective(z, xbuf);
  w.constraints(z, xbuf, cbuf);
  if (!std::isfinite(f) || !cbuf.allFinite()) return kInf;
  w.residual(z, cbuf, rbuf);
  return f + lambda.dot(rbuf) + 0.5 * rho * rbuf.squaredNorm();
}

// Gradient of the augmented Lagrangian. The structural part is
// grad f + J^T (lambda + rho r) where J^T v is accumulated column-by-column
// from grouped central differences without storing J; the slack part is
// -(lambda + rho r).
bool al_gradient(AlWork& w, const Eigen::VectorXd& z, double rho, const Eigen::VectorXd& lambda,
                 const Eigen::VectorXd& c, const Eigen::VectorXd& r, Eigen::VectorXd& grad) {
  const int n = w.n;
  Eigen::VectorXd v = lambda + rho * r;
  grad.setZero(w.nz);

  // Objective part via central differences on the objective's columns.
  {
    Eigen::VectorXd zt = z;
    Eigen::VectorXd xbuf(n);
    const std::vector<int>* cols = &w.obj_cols;
    std::vector<int> all;
    if (cols->empty()) {
      all.resize(n);
      for (int j = 0; j < n; ++j) all[j] = j;
      cols = &all;
    }
    for (int j : *cols) {
      const double h = w.opts.fd_step * (1.0 + std::abs(z(j)));
      zt(j) = z(j) + h;
      const double fp = w.objective(zt, xbuf);
      zt(j) = z(j) - h;
      const double fm = w.objective(zt, xbuf);
      zt(j) = z(j);
      if (!std::isfinite(fp) || !std::isfinite(fm)) return false;
      grad(j) = (fp - fm) / (2.0 * h);
    }
  }

  // Constraint part, one color group at a time.
  const int num_groups = static_cast<int>(w.groups.size());
  bool ok = true;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (num_groups > 8 && !omp_in_parallel())
#endif
  for (int g = 0; g < num_groups; ++g) {
    Eigen::VectorXd zt = z;
    Eigen::VectorXd xbuf(n), cp(w.m), cm(w.m);
    for (int j : w.groups[g]) zt(j) = z(j) + w.opts.fd_step * (1.0 + std::abs(z(j)));
    w.constraints(zt, xbuf, cp);
    for (int j : w.groups[g]) zt(j) = z(j) - w.opts.fd_step * (1.0 + std::abs(z(j)));
    w.constraints(zt, xbuf, cm);
    if (!cp.allFinite() || !cm.allFinite()) {
      ok = false;
    } else {
      for (int j : w.groups[g]) {
        const double h = w.opts.fd_step * (1.0 + std::abs(z(j)));
        double acc = 0.0;
        for (int rrow : w.col_rows[j]) acc += v(rrow) * (cp(rrow) - cm(rrow)) / (2.0 * h);
        grad(j) += acc;
      }
    }
  }
  if (!ok) return false;

  for (int i = 0; i < w.m; ++i) {
    const int s = w.slack_of_row[i];
    if (s >= 0) grad(n + s) = -v(i);
  }
  return true;
}

double projected_gradient_norm(const AlWork& w, const Eigen::VectorXd& z,
                               const Eigen::VectorXd& grad) {
  double norm = 0.0;
  for (int i = 0; i < w.nz; ++i) {
    const double step = std::min(std::max(z(i) - grad(i), w.lo(i)), w.hi(i)) - z(i);
    norm = std::max(norm, std::abs(step));
  }
  return norm;
}

struct LbfgsMemory {
  std::deque<Eigen::VectorXd> s, y;
  std::deque<double> rho;
  int capacity = 8;

  void push(const Eigen::VectorXd& si, const Eigen::VectorXd& yi) {
    const double sy = si.dot(yi);
    if (!(sy > 1e-12 * si.norm() * yi.norm())) return;
    s.push_back(si);
    y.push_back(yi);
    rho.push_back(1.0 / sy);
    if (static_cast<int>(s.size()) > capacity) {
      s.pop_front();
      y.pop_front();
      rho.pop_front();
    }
  }
  void clear() {
    s.clear();
    y.clear();
    rho.clear();
  }

  Eigen::VectorXd direction(const Eigen::VectorXd& grad) const {
    Eigen::VectorXd q = -grad;
    const int k = static_cast<int>(s.size());
    if (k == 0) return q;
    std::vector<double> alpha(k);
    for (int i = k - 1; i >= 0; --i) {
      alpha[i] = rho[i] * s[i].dot(q);
      q -= alpha[i] * y[i];
    }
    const double gamma = s[k - 1].dot(y[k - 1]) / y[k - 1].squaredNorm();
    q *= gamma;
    for (int i = 0; i < k; ++i) {
      const double beta = rho[i] * y[i].dot(q);
      q += (alpha[i] - beta) * s[i];
    }
    return q;
  }
};

// Bound-projected L-BFGS on the augmented Lagrangian. Returns the projected
// gradient norm reached; consumes the shared inner-iteration budget.
double inner_minimize(AlWork& w, Eigen::VectorXd& z, double rho, const Eigen::VectorXd& lambda,
                      double tol, int* budget, bool* failed) {
  Eigen::VectorXd xbuf(w.n), c(w.m), r(w.m), grad(w.nz);
  LbfgsMemory mem;
  mem.capacity = w.opts.lbfgs_memory;

  double f = w.objective(z, xbuf);
  w.constraints(z, xbuf, c);
  if (!std::isfinite(f) || !c.allFinite()) {
    *failed = true;
    return kInf;
  }
  w.residual(z, c, r);
  double al = f + lambda.dot(r) + 0.5 * rho * r.squaredNorm();
  if (!al_gradient(w, z, rho, lambda, c, r, grad)) {
    *failed = true;
    return kInf;
  }

  double pg = projected_gradient_norm(w, z, grad);
  while (pg > tol && *budget > 0) {
    --(*budget);

    Eigen::VectorXd d = mem.direction(grad);
    // Zero directions that push an active bound outward.
    for (int i = 0; i < w.nz; ++i) {
      if ((z(i) <= w.lo(i) && d(i) < 0.0) || (z(i) >= w.hi(i) && d(i) > 0.0)) d(i) = 0.0;
    }
    if (d.dot(grad) > -1e-14 * d.norm() * grad.norm()) {
      d = -grad;
      for (int i = 0; i < w.nz; ++i) {
        if ((z(i) <= w.lo(i) && d(i) < 0.0) || (z(i) >= w.hi(i) && d(i) > 0.0)) d(i) = 0.0;
      }
      mem.clear();
    }

    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd znew(w.nz), cnew(w.m), rnew(w.m);
    double alnew = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      znew = z + alpha * d;
      project(w, znew);
      const Eigen::VectorXd step = znew - z;
      if (step.lpNorm<Eigen::Infinity>() < 1e-16) break;
      alnew = al_value(w, znew, rho, lambda, xbuf, cnew, rnew);
      if (alnew <= al + 1e-4 * grad.dot(step)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // Stationary for this subproblem as far as the line search can tell.
      break;
    }

    Eigen::VectorXd gnew(w.nz);
    if (!al_gradient(w, znew, rho, lambda, cnew, rnew, gnew)) {
      *failed = true;
      return kInf;
    }
    mem.push(znew - z, gnew - grad);
    z = znew;
    c = cnew;
    r = rnew;
    al = alnew;
    grad = gnew;
    pg = projected_gradient_norm(w, z, grad);
  }
  return pg;
}

}  // namespace

SolveReport solve(const NlpProblem& nlp, Eigen::Ref<const Eigen::VectorXd> x0,
                  const SolveOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  SolveReport report;
  if (x0.size() != nlp.num_vars)
    throw std::invalid_argument("solve: starting point length mismatch");

  AlWork w;
  w.nlp = &nlp;
  w.opts = opts;
  w.n = nlp.num_vars;
  w.m = nlp.num_cons;

  // Affine variable scaling from bounds; unbounded variables are scaled from
  // the starting point instead.
  w.scale.resize(w.n);
  w.shift.resize(w.n);
  for (int j = 0; j < w.n; ++j) {
    const double lo = nlp.var_lo(j), hi = nlp.var_hi(j);
    if (opts.scaling && std::isfinite(lo) && std::isfinite(hi) && hi > lo) {
      w.shift(j) = 0.5 * (lo + hi);
      w.scale(j) = std::min(std::max(0.5 * (hi - lo), 1e-2), 1e4);
    } else if (opts.scaling) {
      w.shift(j) = 0.0;
      w.scale(j) = std::max(1.0, std::abs(x0(j)));
    } else {
      w.shift(j) = 0.0;
      w.scale(j) = 1.0;
    }
  }

  // Slack per ranged row; equality rows keep their fixed target.
  w.slack_of_row.assign(w.m, -1);
  w.eq_target = Eigen::VectorXd::Zero(w.m);
  std::vector<double> slack_lo, slack_hi;
  for (int i = 0; i < w.m; ++i) {
    if (nlp.con_lo(i) == nlp.con_hi(i)) {
      w.eq_target(i) = nlp.con_lo(i);
    } else {
      w.slack_of_row[i] = w.n_slack++;
      slack_lo.push_back(nlp.con_lo(i));
      slack_hi.push_back(nlp.con_hi(i));
    }
  }
  w.nz = w.n + w.n_slack;
  w.lo.resize(w.nz);
  w.hi.resize(w.nz);
  for (int j = 0; j < w.n; ++j) {
    w.lo(j) = (nlp.var_lo(j) - w.shift(j)) / w.scale(j);
    w.hi(j) = (nlp.var_hi(j) - w.shift(j)) / w.scale(j);
  }
  for (int s = 0; s < w.n_slack; ++s) {
    w.lo(w.n + s) = slack_lo[s];
    w.hi(w.n + s) = slack_hi[s];
  }

  w.col_rows.resize(w.n);
  for (int r = 0; r < w.m; ++r)
    for (int c : nlp.row_cols[r]) w.col_rows[c].push_back(r);
  {
    const std::vector<int> color = color_columns(nlp.row_cols, w.n);
    const int num_groups = w.n > 0 ? *std::max_element(color.begin(), color.end()) + 1 : 0;
    w.groups.resize(num_groups);
    for (int j = 0; j < w.n; ++j) w.groups[color[j]].push_back(j);
  }
  w.obj_cols = nlp.objective_cols;

  Eigen::VectorXd z(w.nz);
  {
    Eigen::VectorXd x_start = x0;
    if (opts.perturb_start) {
      std::mt19937_64 gen(opts.perturb_seed);
      std::uniform_real_distribution<double> unif(-opts.perturb_amount, opts.perturb_amount);
      for (int j = 0; j < w.n; ++j) x_start(j) += unif(gen) * w.scale(j);
    }
    for (int j = 0; j < w.n; ++j) z(j) = (x_start(j) - w.shift(j)) / w.scale(j);
  }

  Eigen::VectorXd xbuf(w.n), c(w.m), r(w.m);
  {
    const double f0 = w.objective(z, xbuf);
    w.constraints(z, xbuf, c);
    if (!std::isfinite(f0) || !c.allFinite()) {
      report.status = SolveStatus::numerical_failure;
      report.solution = x0;
      report.objective = f0;
      report.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
      return report;
    }
  }
  for (int i = 0; i < w.m; ++i) {
    const int s = w.slack_of_row[i];
    if (s >= 0) z(w.n + s) = std::min(std::max(c(i), w.lo(w.n + s)), w.hi(w.n + s));
  }
  project(w, z);

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(w.m);
  double rho = opts.rho_init;
  int budget = opts.max_iterations;
  double omega = std::max(opts.optimality_tol, 1e-2);
  double feas_best = kInf;
  int stall_count = 0;
  bool failed = false;
  double pg = kInf;

  SolveStatus status = SolveStatus::iteration_limit;
  for (int outer = 0; outer < opts.max_outer && budget > 0; ++outer) {
    // Analytic warm start of the slacks for the current multipliers.
    w.constraints(z, xbuf, c);
    for (int i = 0; i < w.m; ++i) {
      const int s = w.slack_of_row[i];
      if (s >= 0)
        z(w.n + s) = std::min(std::max(c(i) + lambda(i) / rho, w.lo(w.n + s)), w.hi(w.n + s));
    }

    pg = inner_minimize(w, z, rho, lambda, omega, &budget, &failed);
    if (failed) {
      status = SolveStatus::numerical_failure;
      break;
    }

    w.constraints(z, xbuf, c);
    w.residual(z, c, r);
    const double viol = w.true_violation(c);
    const double rnorm = r.lpNorm<Eigen::Infinity>();

    if (viol <= opts.feasibility_tol && pg <= opts.optimality_tol) {
      status = SolveStatus::converged;
      break;
    }

    if (rnorm <= std::max(opts.feasibility_tol, 0.25 * feas_best)) {
      lambda += rho * r;
      feas_best = std::min(feas_best, rnorm);
      omega = std::max(opts.optimality_tol, 0.2 * omega);
      stall_count = 0;
    } else {
      if (rho >= opts.rho_max) {
        if (++stall_count >= 3) {
          status = SolveStatus::infeasible;
          break;
        }
      } else {
        rho = std::min(rho * opts.rho_mult, opts.rho_max);
      }
      omega = std::max(opts.optimality_tol, 0.5 * omega);
    }
  }

  w.constraints(z, xbuf, c);
  w.unscale(z, xbuf);
  report.solution = xbuf;
  report.objective = nlp.objective(xbuf);
  report.max_violation = w.true_violation(c);
  report.projected_gradient_norm = pg;
  report.iterations = opts.max_iterations - budget;
  report.status = status;
  if (status == SolveStatus::converged &&
      !(report.max_violation <= opts.feasibility_tol && pg <= opts.optimality_tol)) {
    report.status = SolveStatus::iteration_limit;
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace ccocp
