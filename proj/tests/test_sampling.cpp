#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccocp/sampling.hpp"

#include <cstdio>
#include <filesystem>

using namespace ccocp;

namespace {

NormalDistributionSpec ex1_noise() {
  NormalDistributionSpec d;
  d.mean = Eigen::Vector2d(0.0, 0.0);
  d.sigma = Eigen::Vector2d(0.001, 0.0005);
  return d;
}

}  // namespace

TEST_CASE("draw_normal moments within standard-error bounds") {
  const SampleSet set = draw_normal(ex1_noise(), 50000, 314159);
  for (int c = 0; c < 2; ++c) {
    const double sigma = ex1_noise().sigma(c);
    const double mean = set.samples.col(c).mean();
    CHECK(std::abs(mean) < 5.0 * sigma / std::sqrt(50000.0));
    const double var =
        (set.samples.col(c).array() - mean).square().sum() / (set.samples.rows() - 1);
    // sd of the sample sd is roughly sigma/sqrt(2N)
    CHECK(std::abs(std::sqrt(var) - sigma) < 5.0 * sigma / std::sqrt(2.0 * 50000.0));
  }
  CHECK(set.rng_name == "mt19937_64+box-muller");
}

TEST_CASE("same seed reproduces the matrix exactly") {
  const SampleSet a = draw_normal(ex1_noise(), 5000, 77);
  const SampleSet b = draw_normal(ex1_noise(), 5000, 77);
  CHECK((a.samples - b.samples).cwiseAbs().maxCoeff() == 0.0);
  const SampleSet c = draw_normal(ex1_noise(), 5000, 78);
  CHECK((a.samples - c.samples).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("invalid distribution rejected") {
  NormalDistributionSpec d = ex1_noise();
  d.sigma(1) = 0.0;
  CHECK_THROWS_AS(draw_normal(d, 10, 1), std::domain_error);
  CHECK_THROWS_AS(draw_normal(ex1_noise(), 0, 1), std::domain_error);
}

TEST_CASE("subsets are prefixes") {
  const SampleSet set = draw_normal(ex1_noise(), 10000, 5);
  const auto s2000 = subset(set, 2000);
  const auto s10000 = subset(set, 10000);
  CHECK(s2000.rows() == 2000);
  CHECK((s10000.topRows(2000) - s2000).cwiseAbs().maxCoeff() == 0.0);
  CHECK((subset(set, 10000) - set.samples).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(subset(set, 0), std::domain_error);
  CHECK_THROWS_AS(subset(set, 10001), std::domain_error);
}

TEST_CASE("longer draws extend shorter ones") {
  const SampleSet small = draw_normal(ex1_noise(), 2000, 99);
  const SampleSet big = draw_normal(ex1_noise(), 10000, 99);
  CHECK((big.samples.topRows(2000) - small.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("save/load round trip") {
  const SampleSet set = draw_normal(ex1_noise(), 500, 2024);
  const std::string path = std::filesystem::temp_directory_path() / "ccocp_samples_test.txt";
  save_samples(set, path);
  const SampleSet back = load_samples(path);
  CHECK(back.seed == set.seed);
  CHECK(back.rng_name == set.rng_name);
  CHECK(back.samples.rows() == set.samples.rows());
  CHECK((back.samples - set.samples).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((back.dist.mean - set.dist.mean).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.dist.sigma - set.dist.sigma).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}
