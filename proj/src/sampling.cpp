#include "ccocp/sampling.hpp"

#include "ccocp/transcription.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ccocp {

namespace {

constexpr const char* kRngName = "mt19937_64+box-muller";

// Uniform in (0, 1] from the top 53 bits; never returns 0 so log() is safe.
inline double uniform01(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
}

}  // namespace

SampleSet draw_normal(const NormalDistributionSpec& dist, int n, std::uint64_t seed) {
  const int d = dist.dim();
  if (n < 1) throw std::domain_error("draw_normal: n must be >= 1");
  if (d < 1 || dist.sigma.size() != d)
    throw std::domain_error("draw_normal: inconsistent distribution spec");
  for (int c = 0; c < d; ++c) {
    if (!(dist.sigma(c) > 0.0)) throw std::domain_error("draw_normal: sigma must be positive");
  }

  SampleSet set;
  set.seed = seed;
  set.dist = dist;
  set.rng_name = kRngName;
  set.samples.resize(n, d);

  std::mt19937_64 gen(seed);
  double spare = 0.0;
  bool has_spare = false;
  auto next_standard_normal = [&]() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    const double u1 = uniform01(gen);
    const double u2 = uniform01(gen);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare = r * std::sin(a);
    has_spare = true;
    return r * std::cos(a);
  };

  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      set.samples(i, c) = dist.mean(c) + dist.sigma(c) * next_standard_normal();
    }
  }
  return set;
}

Eigen::Ref<const SampleMatrix> subset(const SampleSet& set, int n) {
  if (n < 1) throw std::domain_error("subset: n must be >= 1");
  if (n > set.count()) throw std::domain_error("subset: n exceeds the full sample count");
  return set.samples.topRows(n);
}

void save_samples(const SampleSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_samples: cannot open " + path);
  out.precision(17);
  out << "# ccocp-samples v1\n";
  out << "# rng " << set.rng_name << "\n";
  out << "# seed " << set.seed << "\n";
  out << "# n " << set.samples.rows() << "\n";
  out << "# d " << set.samples.cols() << "\n";
  out << "# mean";
  for (int c = 0; c < set.dist.dim(); ++c) out << ' ' << set.dist.mean(c);
  out << "\n# sigma";
  for (int c = 0; c < set.dist.dim(); ++c) out << ' ' << set.dist.sigma(c);
  out << "\n";
  for (Eigen::Index i = 0; i < set.samples.rows(); ++i) {
    for (Eigen::Index c = 0; c < set.samples.cols(); ++c) {
      if (c) out << ' ';
      out << set.samples(i, c);
    }
    out << '\n';
  }
}

SampleSet load_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_samples: cannot open " + path);
  SampleSet set;
  Eigen::Index n = 0, d = 0;
  std::string line;
  std::vector<double> mean, sigma;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hdr(line.substr(1));
      std::string key;
      hdr >> key;
      if (key == "rng") hdr >> set.rng_name;
      else if (key == "seed") hdr >> set.seed;
      else if (key == "n") hdr >> n;
      else if (key == "d") hdr >> d;
      else if (key == "mean") {
        double v;
        while (hdr >> v) mean.push_back(v);
      } else if (key == "sigma") {
        double v;
        while (hdr >> v) sigma.push_back(v);
      }
      continue;
    }
    break;
  }
  if (n < 1 || d < 1) throw std::runtime_error("load_samples: missing n/d header in " + path);
  set.samples.resize(n, d);
  Eigen::Index row = 0;
  do {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream vals(line);
    for (Eigen::Index c = 0; c < d; ++c) {
      if (!(vals >> set.samples(row, c)))
        throw std::runtime_error("load_samples: short row in " + path);
    }
    ++row;
  } while (row < n && std::getline(in, line));
  if (row != n) throw std::runtime_error("load_samples: expected " + std::to_string(n) + " rows");
  set.dist.mean = Eigen::Map<Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  set.dist.sigma =
      Eigen::Map<Eigen::VectorXd>(sigma.data(), static_cast<Eigen::Index>(sigma.size()));
  return set;
}

double validate_risk(const Trajectory& traj, const ChanceConstraintSpec& spec,
                     const NormalDistributionSpec& dist, std::uint64_t fresh_seed, int n_mc) {
  if (n_mc < 1) throw std::domain_error("validate_risk: n_mc must be >= 1");
  const SampleSet fresh = draw_normal(dist, n_mc, fresh_seed);
  const double gate = spec.radius + spec.gate_margin;

  double worst = 0.0;
  for (const auto& phase : traj.phases) {
    const int n_colloc = static_cast<int>(phase.controls.rows());
    for (int i = 0; i < n_colloc; ++i) {
      const double sx = phase.states(i, spec.ix);
      const double sy = phase.states(i, spec.iy);
      const double dx = sx - spec.center_x;
      const double dy = sy - spec.center_y;
      if (dx * dx + dy * dy >= gate * gate) continue;
      long violations = 0;
      for (int j = 0; j < n_mc; ++j) {
        const double psi = spec.circle_margin(sx, sy, fresh.samples(j, 0), fresh.samples(j, 1));
        if (psi > spec.boundary) ++violations;
      }
      worst = std::max(worst, static_cast<double>(violations) / n_mc);
    }
  }
  return worst;
}

}  // namespace ccocp
