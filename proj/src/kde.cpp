#include "ccocp/kde.hpp"

#include "ccocp/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace ccocp {

std::string kernel_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::split_bernstein: return "split_bernstein";
    case KernelFamily::epanechnikov: return "epanechnikov";
    case KernelFamily::gaussian: return "gaussian";
  }
  return "unknown";
}

KernelFamily kernel_from_name(const std::string& name) {
  if (name == "split_bernstein" || name == "split-bernstein" || name == "sb")
    return KernelFamily::split_bernstein;
  if (name == "epanechnikov" || name == "epa") return KernelFamily::epanechnikov;
  if (name == "gaussian" || name == "gauss") return KernelFamily::gaussian;
  throw std::invalid_argument("unknown kernel name: " + name);
}

KernelSpec KernelSpec::make(KernelFamily family) {
  KernelSpec spec;
  spec.family = family;
  switch (family) {
    case KernelFamily::split_bernstein:
      spec.bias_multiplier = 0.0;  // bias lives in the one-sided support
      spec.conforming = true;
      spec.surrogate = true;
      break;
    case KernelFamily::epanechnikov:
      spec.bias_multiplier = 1.0;
      spec.conforming = true;
      break;
    case KernelFamily::gaussian:
      spec.bias_multiplier = 3.0;
      spec.conforming = false;
      break;
  }
  return spec;
}

namespace {

// Epanechnikov k(v) = 3/4 (1 - v^2) on [-1, 1]; closed-form CDF.
inline double epanechnikov_cdf(double eta) {
  if (eta <= -1.0) return 0.0;
  if (eta >= 1.0) return 1.0;
  return 0.25 * (2.0 + 3.0 * eta - eta * eta * eta);
}

inline double gaussian_cdf(double eta) { return 0.5 * std::erfc(-eta / std::sqrt(2.0)); }

}  // namespace

double kernel_cdf(KernelFamily family, double eta) {
  switch (family) {
    case KernelFamily::split_bernstein:
      // Surrogate: Epanechnikov support shifted to [-2, 0], so the CDF
      // saturates exactly at the origin.
      return epanechnikov_cdf(eta + 1.0);
    case KernelFamily::epanechnikov:
      return epanechnikov_cdf(eta);
    case KernelFamily::gaussian:
      return gaussian_cdf(eta);
  }
  return 0.0;
}

double biased_kernel_cdf(const KernelSpec& spec, double eta) {
  return kernel_cdf(spec.family, eta + spec.bias_multiplier);
}

DominanceResult dominance_check(const KernelSpec& spec, int grid_points, double lo, double hi) {
  if (grid_points < 1000) grid_points = 1000;
  DominanceResult result;
  double worst = 0.0;
  auto probe = [&](double eta) {
    const double indicator = eta >= 0.0 ? 1.0 : 0.0;
    const double gap = indicator - biased_kernel_cdf(spec, eta);
    if (gap > worst) worst = gap;
  };
  for (int i = 0; i < grid_points; ++i) {
    probe(lo + (hi - lo) * static_cast<double>(i) / (grid_points - 1));
  }
  probe(0.0);  // the jump point, checked exactly
  result.worst_gap = worst;
  result.dominates = worst <= 1e-12;
  return result;
}

double bandwidth_normal_reference(Eigen::Ref<const Eigen::VectorXd> samples) {
  const Eigen::Index n = samples.size();
  if (n < 2) throw std::domain_error("bandwidth_normal_reference: needs at least 2 samples");
  const double mean = samples.mean();
  const double var = (samples.array() - mean).square().sum() / static_cast<double>(n - 1);
  if (!(var > 0.0)) throw std::domain_error("bandwidth_normal_reference: degenerate samples");
  const double sigma = std::sqrt(var);
  return sigma * std::pow(4.0 / (3.0 * static_cast<double>(n)), 0.2);
}

double chance_estimate(Eigen::Ref<const Eigen::VectorXd> psi_samples, double q,
                       const BandwidthState& bw, const KernelSpec& spec) {
  const Eigen::Index n = psi_samples.size();
  if (n < 1) throw std::domain_error("chance_estimate: empty sample set");
  const double h = bw.effective();
  if (!(h > 0.0)) throw std::domain_error("chance_estimate: bandwidth must be positive");
  const double* psi = psi_samples.data();
  const double sum = blocked_sum(static_cast<std::size_t>(n), [&](std::size_t j) {
    return biased_kernel_cdf(spec, (q - psi[j]) / h);
  });
  return sum / static_cast<double>(n);
}

double chance_estimate_serial(Eigen::Ref<const Eigen::VectorXd> psi_samples, double q,
                              const BandwidthState& bw, const KernelSpec& spec) {
  const Eigen::Index n = psi_samples.size();
  if (n < 1) throw std::domain_error("chance_estimate_serial: empty sample set");
  const double h = bw.effective();
  if (!(h > 0.0)) throw std::domain_error("chance_estimate_serial: bandwidth must be positive");
  const double* psi = psi_samples.data();
  const double sum = serial_sum(static_cast<std::size_t>(n), [&](std::size_t j) {
    return biased_kernel_cdf(spec, (q - psi[j]) / h);
  });
  return sum / static_cast<double>(n);
}

Eigen::VectorXd risk_split(double eps, int n_g) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("risk_split: eps must be in (0,1)");
  if (n_g < 1) throw std::domain_error("risk_split: n_g must be >= 1");
  return Eigen::VectorXd::Constant(n_g, eps / static_cast<double>(n_g));
}

double gated_constraint(Eigen::Ref<const Eigen::VectorXd> y, Eigen::Ref<const Eigen::VectorXd> u,
                        double t, const ChanceConstraintSpec& spec,
                        const SampleMatrix& xi, int n_use, const BandwidthState& bw,
                        const KernelSpec& kernel) {
  const double dx = y(spec.ix) - spec.center_x;
  const double dy = y(spec.iy) - spec.center_y;
  const double gate = spec.radius + spec.gate_margin;
  if (dx * dx + dy * dy >= gate * gate) return 0.0;

  const int n = n_use > 0 ? std::min<int>(n_use, static_cast<int>(xi.rows())) : static_cast<int>(xi.rows());
  const double h = bw.effective();
  if (!(h > 0.0)) throw std::domain_error("gated_constraint: bandwidth must be positive");
  const double delta = spec.boundary;

  // Violation-probability form: the estimate of P(psi > delta) is the mean
  // of K_B((psi_j - delta)/h), which equals the P(psi' < q') estimate with
  // psi' = -psi and q' = -delta.
  double sum;
  if (spec.margin) {
    sum = blocked_sum(static_cast<std::size_t>(n), [&](std::size_t j) {
      const double psi = spec.margin(y, u, t, xi.row(static_cast<Eigen::Index>(j)));
      return biased_kernel_cdf(kernel, (psi - delta) / h);
    });
  } else {
    const double sx = y(spec.ix);
    const double sy = y(spec.iy);
    sum = blocked_sum(static_cast<std::size_t>(n), [&](std::size_t j) {
      const auto row = xi.row(static_cast<Eigen::Index>(j));
      const double psi = spec.circle_margin(sx, sy, row(0), row(1));
      return biased_kernel_cdf(kernel, (psi - delta) / h);
    });
  }
  return sum / static_cast<double>(n);
}

}  // namespace ccocp
