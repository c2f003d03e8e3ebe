#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>

namespace ccocp {

using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Kernel families available for the biased density estimator. The
// split-Bernstein slot is filled by a one-sided surrogate (Epanechnikov CDF
// shifted so all kernel mass sits at nonpositive offsets); it is flagged as
// a surrogate wherever kernels are reported.
enum class KernelFamily { split_bernstein, epanechnikov, gaussian };

std::string kernel_name(KernelFamily family);
KernelFamily kernel_from_name(const std::string& name);

struct KernelSpec {
  KernelFamily family = KernelFamily::epanechnikov;
  // Bias expressed as B = m * h. Epanechnikov uses m = 1, Gaussian m = 3;
  // the split-Bernstein surrogate carries its bias in the one-sided support
  // and uses m = 0.
  double bias_multiplier = 1.0;
  // True iff the biased CDF dominates the indicator (conservative family).
  bool conforming = true;
  bool surrogate = false;

  static KernelSpec make(KernelFamily family);
};

// Integrated (CDF) form of the kernel, K(eta) = integral of k up to eta.
double kernel_cdf(KernelFamily family, double eta);

// Biased integrated kernel K_B(eta) = K(eta + m). The shift direction is the
// one that inflates the violation estimate, which is what makes the sample
// average an upper bound on the empirical violation fraction for conforming
// kernels.
double biased_kernel_cdf(const KernelSpec& spec, double eta);

struct DominanceResult {
  bool dominates = false;
  double worst_gap = 0.0;  // max over the grid of indicator - K_B, clamped at 0
};

// Checks K_B(eta) >= 1_{[0,inf)}(eta) on a uniform grid over [lo, hi] plus
// the jump point eta = 0 exactly.
DominanceResult dominance_check(const KernelSpec& spec, int grid_points = 4001,
                                double lo = -10.0, double hi = 10.0);

// Normal-reference bandwidth h = sigma_hat * (4 / (3 N))^{1/5}.
double bandwidth_normal_reference(Eigen::Ref<const Eigen::VectorXd> samples);

struct BandwidthState {
  double h_base = 0.0;
  double multiplier = 1.0;  // w >= 1
  double effective() const { return h_base * multiplier; }
};

// Biased KDE estimate of P(psi < q): mean over samples of K_B((q - psi_j)/h).
double chance_estimate(Eigen::Ref<const Eigen::VectorXd> psi_samples, double q,
                       const BandwidthState& bw, const KernelSpec& spec);
// Reference implementation with a plain serial loop; used by tests and the
// serial/parallel benchmark.
double chance_estimate_serial(Eigen::Ref<const Eigen::VectorXd> psi_samples, double q,
                              const BandwidthState& bw, const KernelSpec& spec);

// Uniform Boole split of the joint risk budget.
Eigen::VectorXd risk_split(double eps, int n_g);

// A scalar chance constraint of the keep-out form
//   P( R^2 - (y[ix]+xi_1-cx)^2 - (y[iy]+xi_2-cy)^2 > boundary ) <= risk,
// evaluated through the proximity gate: the sampled estimate is only formed
// when the state lies within radius + gate_margin of the center. A general
// margin callback can replace the circle form.
struct ChanceConstraintSpec {
  double risk = 0.01;      // epsilon_m
  double boundary = 0.0;   // delta; violation event is psi > boundary

  int ix = 0;
  int iy = 1;
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;
  double gate_margin = 0.0;  // b

  // Optional general margin psi(y, u, t, xi). When set it replaces the
  // circle form inside the sampled branch (the gate test stays geometric).
  std::function<double(Eigen::Ref<const Eigen::VectorXd>, Eigen::Ref<const Eigen::VectorXd>,
                       double, Eigen::Ref<const Eigen::RowVectorXd>)>
      margin;

  double circle_margin(double sx, double sy, double xi1, double xi2) const {
    const double dx = sx + xi1 - center_x;
    const double dy = sy + xi2 - center_y;
    return radius * radius - dx * dx - dy * dy;
  }
};

// Two-branch evaluation of the gated chance constraint. Returns 0 when the
// deterministic distance test passes, otherwise the biased KDE estimate of
// the violation probability P(psi > boundary). The row is feasible when the
// returned value is <= spec.risk.
double gated_constraint(Eigen::Ref<const Eigen::VectorXd> y, Eigen::Ref<const Eigen::VectorXd> u,
                        double t, const ChanceConstraintSpec& spec,
                        const SampleMatrix& xi, int n_use, const BandwidthState& bw,
                        const KernelSpec& kernel);

}  // namespace ccocp
