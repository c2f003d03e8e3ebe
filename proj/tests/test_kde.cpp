#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccocp/kde.hpp"
#include "ccocp/parallel.hpp"

#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ccocp;

namespace {

// Quadrature oracle for the kernel-mixture CDF at q: integrates the kernel
// density of each sample up to q with a fine trapezoid rule, including the
// bias shift. Deliberately ignorant of the closed-form CDFs.
double mixture_cdf_oracle(const Eigen::VectorXd& psi, double q, double h, const KernelSpec& spec) {
  double support_lo = -14.0, support_hi = 14.0;
  auto density = [&](double v) {
    switch (spec.family) {
      case KernelFamily::epanechnikov:
        return std::abs(v) <= 1.0 ? 0.75 * (1.0 - v * v) : 0.0;
      case KernelFamily::split_bernstein: {
        const double s = v + 1.0;  // surrogate: support shifted to [-2, 0]
        return std::abs(s) <= 1.0 ? 0.75 * (1.0 - s * s) : 0.0;
      }
      case KernelFamily::gaussian:
        return std::exp(-0.5 * v * v) / std::sqrt(2.0 * M_PI);
    }
    return 0.0;
  };
  if (spec.family == KernelFamily::epanechnikov) {
    support_lo = -1.0;
    support_hi = 1.0;
  } else if (spec.family == KernelFamily::split_bernstein) {
    support_lo = -2.0;
    support_hi = 0.0;
  }

  double total = 0.0;
  const int steps = 20000;  // even, Simpson
  for (Eigen::Index j = 0; j < psi.size(); ++j) {
    // K_B(eta_j) = integral over v <= eta_j + m of k(v), clipped to support
    const double upper = std::min((q - psi(j)) / h + spec.bias_multiplier, support_hi);
    const double lo = support_lo;
    if (upper <= lo) continue;
    const double dv = (upper - lo) / steps;
    double acc = density(lo) + density(upper);
    for (int s = 1; s < steps; ++s) acc += (s % 2 == 1 ? 4.0 : 2.0) * density(lo + s * dv);
    total += acc * dv / 3.0;
  }
  return total / static_cast<double>(psi.size());
}

}  // namespace

TEST_CASE("integrated kernels") {
  CHECK(kernel_cdf(KernelFamily::epanechnikov, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kernel_cdf(KernelFamily::epanechnikov, 0.5) == doctest::Approx(0.84375).epsilon(1e-15));
  CHECK(kernel_cdf(KernelFamily::gaussian, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kernel_cdf(KernelFamily::epanechnikov, -2.0) == 0.0);
  CHECK(kernel_cdf(KernelFamily::epanechnikov, 2.0) == 1.0);
  // Monotone, limits 0 and 1.
  for (KernelFamily fam : {KernelFamily::split_bernstein, KernelFamily::epanechnikov,
                           KernelFamily::gaussian}) {
    double prev = -1.0;
    for (double eta = -8.0; eta <= 8.0; eta += 0.05) {
      const double v = kernel_cdf(fam, eta);
      CHECK(v >= prev);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
    CHECK(kernel_cdf(fam, -40.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(kernel_cdf(fam, 40.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("biased kernels") {
  const KernelSpec epa = KernelSpec::make(KernelFamily::epanechnikov);
  CHECK(epa.bias_multiplier == 1.0);
  CHECK(epa.conforming);
  CHECK(biased_kernel_cdf(epa, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(biased_kernel_cdf(epa, -0.5) == doctest::Approx(0.84375).epsilon(1e-15));

  const KernelSpec gauss = KernelSpec::make(KernelFamily::gaussian);
  CHECK(gauss.bias_multiplier == 3.0);
  CHECK_FALSE(gauss.conforming);
  CHECK(biased_kernel_cdf(gauss, 0.0) == doctest::Approx(0.9986501019683699).epsilon(1e-12));

  const KernelSpec sb = KernelSpec::make(KernelFamily::split_bernstein);
  CHECK(sb.surrogate);
  CHECK(sb.conforming);
  CHECK(biased_kernel_cdf(sb, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dominance check") {
  SUBCASE("epanechnikov with B = h dominates with zero gap") {
    const auto res = dominance_check(KernelSpec::make(KernelFamily::epanechnikov));
    CHECK(res.dominates);
    CHECK(res.worst_gap == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("gaussian with B = 3h fails with gap 1 - Phi(3)") {
    const auto res = dominance_check(KernelSpec::make(KernelFamily::gaussian));
    CHECK_FALSE(res.dominates);
    CHECK(res.worst_gap == doctest::Approx(1.0 - 0.9986501019683699).epsilon(1e-6));
  }
  SUBCASE("unbiased epanechnikov fails") {
    KernelSpec spec = KernelSpec::make(KernelFamily::epanechnikov);
    spec.bias_multiplier = 0.0;
    const auto res = dominance_check(spec);
    CHECK_FALSE(res.dominates);
    CHECK(res.worst_gap >= 0.5);
  }
  SUBCASE("split-bernstein surrogate dominates with its configured bias") {
    CHECK(dominance_check(KernelSpec::make(KernelFamily::split_bernstein)).dominates);
  }
}

TEST_CASE("normal reference bandwidth") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Exact formula values for unit sample deviation.
  Eigen::VectorXd z(2000);
  for (int i = 0; i < 2000; ++i) z(i) = normal(gen);
  const double mean = z.mean();
  const double sd = std::sqrt((z.array() - mean).square().sum() / (z.size() - 1));
  Eigen::VectorXd unit = (z.array() - mean) / sd;  // sample sigma exactly 1

  const double h2000 = bandwidth_normal_reference(unit);
  CHECK(h2000 == doctest::Approx(std::pow(4.0 / 6000.0, 0.2)).epsilon(1e-12));
  CHECK(h2000 == doctest::Approx(0.23165).epsilon(1e-4));

  // Linearity in the sample deviation.
  CHECK(bandwidth_normal_reference(2.0 * unit) == doctest::Approx(2.0 * h2000).epsilon(1e-12));

  Eigen::VectorXd unit50k(50000);
  for (int i = 0; i < 50000; ++i) unit50k(i) = normal(gen);
  const double m2 = unit50k.mean();
  const double s2 = std::sqrt((unit50k.array() - m2).square().sum() / (unit50k.size() - 1));
  unit50k = (unit50k.array() - m2) / s2;
  CHECK(bandwidth_normal_reference(unit50k) ==
        doctest::Approx(std::pow(4.0 / 150000.0, 0.2)).epsilon(1e-12));

  CHECK_THROWS_AS(bandwidth_normal_reference(Eigen::VectorXd::Constant(10, 3.0)),
                  std::domain_error);
  CHECK_THROWS_AS(bandwidth_normal_reference(Eigen::VectorXd::Constant(1, 3.0)),
                  std::domain_error);
}

TEST_CASE("worked chance estimate") {
  Eigen::VectorXd psi(3);
  psi << 0.05, 0.2, -0.05;
  const BandwidthState bw{0.1, 1.0};
  const KernelSpec epa = KernelSpec::make(KernelFamily::epanechnikov);
  const double est = chance_estimate(psi, 0.0, bw, epa);
  CHECK(est == doctest::Approx((0.84375 + 0.0 + 1.0) / 3.0).epsilon(1e-12));
  CHECK(chance_estimate_serial(psi, 0.0, bw, epa) == doctest::Approx(est).epsilon(1e-15));
}

TEST_CASE("estimate saturation") {
  const KernelSpec epa = KernelSpec::make(KernelFamily::epanechnikov);
  const double h = 0.07;
  SUBCASE("all samples beyond the biased support give exactly zero") {
    Eigen::VectorXd psi = Eigen::VectorXd::LinSpaced(11, 1.0, 2.0);
    // eta + m = (q - psi)/h + 1 <= -1 for all psi >= q + 2h
    CHECK(chance_estimate(psi, 0.5, BandwidthState{h, 1.0}, epa) == 0.0);
  }
  SUBCASE("deep violation saturates at one") {
    Eigen::VectorXd psi(1);
    psi << 0.5 - 2.0 * h;
    CHECK(chance_estimate(psi, 0.5, BandwidthState{h, 1.0}, epa) == 1.0);
  }
}

TEST_CASE("monotonicity and conservatism properties") {
  std::mt19937_64 gen(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  const KernelSpec epa = KernelSpec::make(KernelFamily::epanechnikov);
  const KernelSpec sb = KernelSpec::make(KernelFamily::split_bernstein);

  for (int trial = 0; trial < 200; ++trial) {
    const int n = 5 + trial % 37;
    Eigen::VectorXd psi(n);
    for (int j = 0; j < n; ++j) psi(j) = normal(gen);
    const double q = 0.3 * normal(gen);
    const BandwidthState bw{0.05 + 0.2 * std::abs(normal(gen)), 1.0};

    for (const KernelSpec& spec : {epa, sb}) {
      const double est = chance_estimate(psi, q, bw, spec);
      double frac = 0.0;
      for (int j = 0; j < n; ++j)
        if (psi(j) <= q) frac += 1.0;
      frac /= n;
      CHECK(est >= frac - 1e-12);  // conservatism

      // Shifting all samples up (more margin) never raises the estimate.
      const double est_shifted = chance_estimate(psi.array() + 0.05, q, bw, spec);
      CHECK(est_shifted <= est + 1e-12);
    }
  }
}

TEST_CASE("bandwidth monotonicity on the all-safe side") {
  // With every sample on the safe side of q the eta_j stay negative for any
  // bandwidth, so widening w moves them toward the kernel and can only grow
  // the estimate.
  const KernelSpec epa = KernelSpec::make(KernelFamily::epanechnikov);
  Eigen::VectorXd psi = Eigen::VectorXd::LinSpaced(30, 0.3, 2.0);
  const double q = 0.0;
  REQUIRE(psi.minCoeff() > q);
  // All-safe at the base bandwidth: eta_j <= -m.
  REQUIRE((q - psi.minCoeff()) / 0.05 <= -epa.bias_multiplier);
  double prev = -1.0;
  for (double w : {1.0, 2.0, 5.0, 20.0, 100.0}) {
    const double est = chance_estimate(psi, q, BandwidthState{0.05, w}, epa);
    CHECK(est >= prev - 1e-15);
    prev = est;
  }
}

TEST_CASE("estimate matches the quadrature oracle") {
  std::mt19937_64 gen(123);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const KernelFamily fam : {KernelFamily::epanechnikov, KernelFamily::gaussian,
                                 KernelFamily::split_bernstein}) {
    const KernelSpec spec = KernelSpec::make(fam);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd psi(8);
      for (int j = 0; j < 8; ++j) psi(j) = normal(gen);
      const double q = 0.2 * normal(gen);
      const BandwidthState bw{0.3, 1.0};
      const double est = chance_estimate(psi, q, bw, spec);
      const double oracle = mixture_cdf_oracle(psi, q, bw.effective(), spec);
      CHECK(est == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("risk split") {
  CHECK(risk_split(0.01, 1)(0) == doctest::Approx(0.01).epsilon(1e-15));
  const Eigen::VectorXd two = risk_split(0.01, 2);
  CHECK(two(0) == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(two(1) == doctest::Approx(0.005).epsilon(1e-15));
  for (int n : {1, 3, 7}) CHECK(risk_split(0.05, n).sum() <= 0.05 + 1e-15);
  CHECK_THROWS_AS(risk_split(0.0, 1), std::domain_error);
  CHECK_THROWS_AS(risk_split(0.01, 0), std::domain_error);
}

TEST_CASE("gated constraint branches") {
  ChanceConstraintSpec spec;
  spec.risk = 0.01;
  spec.boundary = 0.02;
  spec.center_x = 0.193;
  spec.center_y = 0.395;
  spec.radius = 0.243;
  spec.gate_margin = 0.05;

  SampleMatrix xi(200, 2);
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n1(0.0, 0.001), n2(0.0, 0.0005);
  for (int j = 0; j < 200; ++j) {
    xi(j, 0) = n1(gen);
    xi(j, 1) = n2(gen);
  }
  const BandwidthState bw{1e-4, 1.0};
  const KernelSpec epa = KernelSpec::make(KernelFamily::epanechnikov);
  Eigen::VectorXd u(0);

  SUBCASE("far outside the gate: exactly zero") {
    Eigen::VectorXd y(2);
    y << spec.center_x + 0.4, spec.center_y;
    CHECK(gated_constraint(y, u, 0.0, spec, xi, 200, bw, epa) == 0.0);
  }
  SUBCASE("at the keep-out center: saturated violation") {
    Eigen::VectorXd y(2);
    y << spec.center_x, spec.center_y;
    const double est = gated_constraint(y, u, 0.0, spec, xi, 200, bw, epa);
    CHECK(est == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est > spec.risk);
  }
  SUBCASE("estimate dominates the indicator on the inflated boundary") {
    // Point such that psi = boundary exactly at zero noise.
    const double d = std::sqrt(spec.radius * spec.radius - spec.boundary);
    Eigen::VectorXd y(2);
    y << spec.center_x + d, spec.center_y;
    const double est = gated_constraint(y, u, 0.0, spec, xi, 200, bw, epa);
    double frac = 0.0;
    for (int j = 0; j < 200; ++j)
      if (spec.circle_margin(y(0), y(1), xi(j, 0), xi(j, 1)) > spec.boundary) frac += 1.0;
    frac /= 200.0;
    CHECK(est >= frac - 1e-12);
  }
  SUBCASE("general margin callback agrees with the circle fast path") {
    ChanceConstraintSpec generic = spec;
    generic.margin = [&spec](Eigen::Ref<const Eigen::VectorXd> y,
                             Eigen::Ref<const Eigen::VectorXd>, double,
                             Eigen::Ref<const Eigen::RowVectorXd> xi_row) {
      return spec.circle_margin(y(0), y(1), xi_row(0), xi_row(1));
    };
    Eigen::VectorXd y(2);
    y << spec.center_x + spec.radius * 0.9, spec.center_y;
    const double a = gated_constraint(y, u, 0.0, spec, xi, 200, bw, epa);
    const double b = gated_constraint(y, u, 0.0, generic, xi, 200, bw, epa);
    CHECK(a == doctest::Approx(b).epsilon(1e-15));
  }
}

TEST_CASE("blocked reduction is bit-stable across thread counts") {
  Eigen::VectorXd psi(20000);
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int j = 0; j < 20000; ++j) psi(j) = normal(gen);
  const BandwidthState bw{0.2, 1.0};
  const KernelSpec epa = KernelSpec::make(KernelFamily::epanechnikov);

#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double r1 = chance_estimate(psi, 0.1, bw, epa);
  omp_set_num_threads(2);
  const double r2 = chance_estimate(psi, 0.1, bw, epa);
  omp_set_num_threads(3);
  const double r3 = chance_estimate(psi, 0.1, bw, epa);
  omp_set_num_threads(saved);
  CHECK(r1 == r2);
  CHECK(r1 == r3);
#endif
  // Blocked and plain serial summation agree to roundoff.
  const double blocked = chance_estimate(psi, 0.1, bw, epa);
  const double serial = chance_estimate_serial(psi, 0.1, bw, epa);
  CHECK(blocked == doctest::Approx(serial).epsilon(1e-14));
}
