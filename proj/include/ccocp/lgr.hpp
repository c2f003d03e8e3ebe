#pragma once

#include <Eigen/Core>

namespace ccocp {

// Legendre-Gauss-Radau collocation rule on [-1, 1). The first node is -1,
// all nodes lie strictly below +1, and the quadrature is exact for
// polynomials of degree <= 2n - 2. `augmented_nodes` appends the
// noncollocated right endpoint +1 used by the state interpolant.
struct LgrRule {
  int n = 0;
  Eigen::VectorXd nodes;            // size n
  Eigen::VectorXd weights;          // size n, sum = 2
  Eigen::VectorXd augmented_nodes;  // size n + 1, last entry +1
};

// Differentiation matrix mapping state values at the n + 1 augmented nodes
// to derivative values at the n collocation nodes.
struct DiffMatrix {
  Eigen::MatrixXd entries;  // n x (n + 1), rows sum to zero
};

// Mesh over the phase domain [-1, 1]: interval boundaries plus the LGR
// degree used in each interval.
struct Mesh {
  Eigen::VectorXd boundaries;  // size K + 1, boundaries[0] = -1, back = +1
  std::vector<int> degrees;    // size K

  int intervals() const { return static_cast<int>(degrees.size()); }
  int total_collocation() const;
};

Mesh uniform_mesh(int intervals, int degree);

inline constexpr int kMaxLgrDegree = 24;

// Rules and differentiation matrices are precomputed once for all degrees
// up to kMaxLgrDegree and shared; callers receive references into the
// immutable table.
const LgrRule& lgr_rule(int n);
const DiffMatrix& diff_matrix(int n);

// Affine map between the reference interval [-1, 1] and [t0, tf].
double map_tau_to_t(double tau, double t0, double tf);
double map_t_to_tau(double t, double t0, double tf);

// Rule for mesh interval k (0-based) together with the interval half-width
// used to scale defects and quadrature weights.
struct IntervalRule {
  const LgrRule* rule;
  const DiffMatrix* dmat;
  double half_width;
  double tau_lo;
  double tau_hi;
};

IntervalRule interval_rule(const Mesh& mesh, int k);

// Barycentric Lagrange interpolation helpers over an arbitrary node set.
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes);
double barycentric_eval(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary,
                        const Eigen::VectorXd& values, double x);

// Legendre polynomial helpers (three-term recurrence).
double legendre_p(int n, double x);
double legendre_p_derivative(int n, double x);

}  // namespace ccocp
