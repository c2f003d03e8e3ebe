// Compares the serial reference kernels against the blocked OpenMP versions
// on the hot loops: the biased-KDE chance estimate and the gated constraint
// row evaluation.

#include "ccocp/kde.hpp"
#include "ccocp/parallel.hpp"
#include "ccocp/sampling.hpp"

#include <chrono>
#include <cstdio>

using namespace ccocp;

namespace {

template <class F>
double time_ms(F&& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  const KernelSpec kernel = KernelSpec::make(KernelFamily::epanechnikov);
  NormalDistributionSpec dist;
  dist.mean = Eigen::Vector2d(0.0, 0.0);
  dist.sigma = Eigen::Vector2d(0.001, 0.0005);

  std::printf("threads available: %d\n", max_worker_threads());
  std::printf("%-10s %-14s %-14s %-10s %-12s\n", "samples", "serial(ms)", "blocked(ms)", "speedup",
              "max|diff|");

  for (int n : {2000, 10000, 50000, 200000}) {
    const SampleSet set = draw_normal(dist, n, 42);
    Eigen::VectorXd psi(n);
    for (int j = 0; j < n; ++j)
      psi(j) = 0.243 * 0.243 - set.samples(j, 0) * set.samples(j, 0) -
               set.samples(j, 1) * set.samples(j, 1) - 2e-4 * j / n;
    const BandwidthState bw{bandwidth_normal_reference(psi), 1.0};

    volatile double sink = 0.0;
    const int reps = n <= 10000 ? 200 : 50;
    const double t_serial =
        time_ms([&] { sink = chance_estimate_serial(psi, 0.0, bw, kernel); }, reps);
    const double r_serial = sink;
    const double t_blocked = time_ms([&] { sink = chance_estimate(psi, 0.0, bw, kernel); }, reps);
    const double r_blocked = sink;

    std::printf("%-10d %-14.4f %-14.4f %-10.2f %-12.3e\n", n, t_serial, t_blocked,
                t_serial / t_blocked, std::abs(r_serial - r_blocked));
  }

  // Gated row evaluation at a point inside the gate, full-sized sample set.
  {
    const int n = 50000;
    const SampleSet set = draw_normal(dist, n, 42);
    ChanceConstraintSpec spec;
    spec.radius = 0.243;
    spec.center_x = 0.193;
    spec.center_y = 0.395;
    spec.gate_margin = 0.05;
    spec.boundary = 0.02;
    Eigen::VectorXd y(2);
    y << spec.center_x + spec.radius, spec.center_y;
    Eigen::VectorXd u(0);
    const BandwidthState bw{6e-5, 1.0};
    volatile double sink = 0.0;
    const double t_row = time_ms(
        [&] { sink = gated_constraint(y, u, 0.0, spec, set.samples, n, bw, kernel); }, 100);
    std::printf("gated row, n=%d: %.4f ms (estimate %.4f)\n", n, t_row, double(sink));
  }
  return 0;
}
