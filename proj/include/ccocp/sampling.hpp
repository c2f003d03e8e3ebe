#pragma once

#include "ccocp/kde.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace ccocp {

struct Trajectory;

// Componentwise-independent normal disturbance model.
struct NormalDistributionSpec {
  Eigen::VectorXd mean;
  Eigen::VectorXd sigma;
  int dim() const { return static_cast<int>(mean.size()); }
};

// One run's disturbance draws. Rows are samples, columns are components of
// xi. Row-major storage so prefix subsets are contiguous views.
struct SampleSet {
  SampleMatrix samples;
  std::uint64_t seed = 0;
  NormalDistributionSpec dist;
  std::string rng_name;  // recorded in run metadata for reproducibility

  int count() const { return static_cast<int>(samples.rows()); }
};

// Draws n samples of the given distribution. The generator is mt19937_64
// feeding an explicit Box-Muller transform, so draws are reproducible from
// the seed without depending on implementation-defined library
// distributions.
SampleSet draw_normal(const NormalDistributionSpec& dist, int n, std::uint64_t seed);

// Prefix view of the first n rows, so escalating the sample count only ever
// appends information. The view aliases the set's storage.
Eigen::Ref<const SampleMatrix> subset(const SampleSet& set, int n);

void save_samples(const SampleSet& set, const std::string& path);
SampleSet load_samples(const std::string& path);

// Post-hoc Monte-Carlo check of a solved trajectory against fresh draws:
// empirical violation probability of the chance constraint at each
// collocation point, maximized over points.
double validate_risk(const Trajectory& traj, const ChanceConstraintSpec& spec,
                     const NormalDistributionSpec& dist, std::uint64_t fresh_seed, int n_mc);

}  // namespace ccocp
