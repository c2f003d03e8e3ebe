#include "ccocp/lgr.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <stdexcept>

namespace ccocp {

double legendre_p(int n, double x) {
  if (n == 0) return 1.0;
  double pm1 = 1.0, p = x;
  for (int k = 1; k < n; ++k) {
    const double pp1 = ((2.0 * k + 1.0) * x * p - k * pm1) / (k + 1.0);
    pm1 = p;
    p = pp1;
  }
  return p;
}

double legendre_p_derivative(int n, double x) {
  if (n == 0) return 0.0;
  // P'_n = n (x P_n - P_{n-1}) / (x^2 - 1); valid away from x = +-1.
  const double denom = x * x - 1.0;
  if (std::abs(denom) < 1e-12) {
    // Endpoint values: P'_n(1) = n(n+1)/2, P'_n(-1) = (-1)^{n+1} n(n+1)/2.
    const double v = 0.5 * n * (n + 1.0);
    return x > 0 ? v : ((n % 2 == 0) ? -v : v);
  }
  return n * (x * legendre_p(n, x) - legendre_p(n - 1, x)) / denom;
}

namespace {

// Defining polynomial of the LGR points: q(tau) = P_{n-1}(tau) + P_n(tau).
double radau_poly(int n, double x) { return legendre_p(n - 1, x) + legendre_p(n, x); }
double radau_poly_derivative(int n, double x) {
  return legendre_p_derivative(n - 1, x) + legendre_p_derivative(n, x);
}

// Interior LGR nodes are the roots of the Jacobi polynomial P_{n-1}^{(0,1)}.
// Eigenvalues of the symmetric Jacobi matrix give machine-accurate starting
// points which a couple of Newton steps on P_{n-1} + P_n then polish below
// the 1e-13 residual requirement.
Eigen::VectorXd interior_nodes(int n) {
  const int m = n - 1;
  Eigen::VectorXd roots(m);
  if (m == 0) return roots;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    jac(k, k) = 1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
    if (k >= 1) {
      const double b = std::sqrt(k * (k + 1.0)) / (2.0 * k + 1.0);
      jac(k, k - 1) = b;
      jac(k - 1, k) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  roots = es.eigenvalues();
  for (int i = 0; i < m; ++i) {
    double x = roots(i);
    for (int it = 0; it < 50; ++it) {
      const double f = radau_poly(n, x);
      const double df = radau_poly_derivative(n, x);
      const double dx = f / df;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    roots(i) = x;
  }
  std::sort(roots.data(), roots.data() + m);
  return roots;
}

LgrRule build_rule(int n) {
  LgrRule rule;
  rule.n = n;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.nodes(0) = -1.0;
  const Eigen::VectorXd interior = interior_nodes(n);
  for (int i = 0; i < n - 1; ++i) rule.nodes(i + 1) = interior(i);

  // Radau weights: w_1 = 2/n^2 at the fixed endpoint and
  // w_i = (1 - tau_i) / (n^2 P_{n-1}(tau_i)^2) at the interior nodes.
  rule.weights(0) = 2.0 / (n * static_cast<double>(n));
  for (int i = 1; i < n; ++i) {
    const double tau = rule.nodes(i);
    const double p = legendre_p(n - 1, tau);
    rule.weights(i) = (1.0 - tau) / (n * static_cast<double>(n) * p * p);
  }

  rule.augmented_nodes.resize(n + 1);
  rule.augmented_nodes.head(n) = rule.nodes;
  rule.augmented_nodes(n) = 1.0;
  return rule;
}

DiffMatrix build_diff_matrix(const LgrRule& rule) {
  const int n = rule.n;
  const Eigen::VectorXd& x = rule.augmented_nodes;
  const Eigen::VectorXd v = barycentric_weights(x);
  DiffMatrix dm;
  dm.entries.resize(n, n + 1);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      const double dij = (v(j) / v(i)) / (x(i) - x(j));
      dm.entries(i, j) = dij;
      diag -= dij;
    }
    dm.entries(i, i) = diag;
  }
  return dm;
}

struct RuleTable {
  std::array<LgrRule, kMaxLgrDegree + 1> rules;
  std::array<DiffMatrix, kMaxLgrDegree + 1> dmats;
  RuleTable() {
    for (int n = 1; n <= kMaxLgrDegree; ++n) {
      rules[n] = build_rule(n);
      dmats[n] = build_diff_matrix(rules[n]);
    }
  }
};

const RuleTable& table() {
  static const RuleTable t;
  return t;
}

}  // namespace

const LgrRule& lgr_rule(int n) {
  if (n < 1 || n > kMaxLgrDegree)
    throw std::domain_error("lgr_rule: degree must be in [1, " + std::to_string(kMaxLgrDegree) + "]");
  return table().rules[n];
}

const DiffMatrix& diff_matrix(int n) {
  if (n < 1 || n > kMaxLgrDegree) throw std::domain_error("diff_matrix: degree out of range");
  return table().dmats[n];
}

double map_tau_to_t(double tau, double t0, double tf) {
  if (!(tf > t0)) throw std::domain_error("map_tau_to_t: requires tf > t0");
  return 0.5 * (tf - t0) * tau + 0.5 * (tf + t0);
}

double map_t_to_tau(double t, double t0, double tf) {
  if (!(tf > t0)) throw std::domain_error("map_t_to_tau: requires tf > t0");
  return (2.0 * t - (tf + t0)) / (tf - t0);
}

int Mesh::total_collocation() const {
  int total = 0;
  for (int d : degrees) total += d;
  return total;
}

Mesh uniform_mesh(int intervals, int degree) {
  Mesh mesh;
  mesh.boundaries = Eigen::VectorXd::LinSpaced(intervals + 1, -1.0, 1.0);
  mesh.boundaries(0) = -1.0;
  mesh.boundaries(intervals) = 1.0;
  mesh.degrees.assign(intervals, degree);
  return mesh;
}

IntervalRule interval_rule(const Mesh& mesh, int k) {
  if (k < 0 || k >= mesh.intervals()) throw std::out_of_range("interval_rule: index out of range");
  IntervalRule ir;
  ir.rule = &lgr_rule(mesh.degrees[k]);
  ir.dmat = &diff_matrix(mesh.degrees[k]);
  ir.tau_lo = mesh.boundaries(k);
  ir.tau_hi = mesh.boundaries(k + 1);
  ir.half_width = 0.5 * (ir.tau_hi - ir.tau_lo);
  return ir;
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes) {
  const int m = static_cast<int>(nodes.size());
  Eigen::VectorXd v(m);
  for (int k = 0; k < m; ++k) {
    double prod = 1.0;
    for (int l = 0; l < m; ++l) {
      if (l != k) prod *= nodes(k) - nodes(l);
    }
    v(k) = 1.0 / prod;
  }
  return v;
}

double barycentric_eval(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary,
                        const Eigen::VectorXd& values, double x) {
  const int m = static_cast<int>(nodes.size());
  double num = 0.0, den = 0.0;
  for (int k = 0; k < m; ++k) {
    const double dx = x - nodes(k);
    if (dx == 0.0) return values(k);
    const double w = bary(k) / dx;
    num += w * values(k);
    den += w;
  }
  return num / den;
}

}  // namespace ccocp
