#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccocp/lgr.hpp"

#include <cmath>

using namespace ccocp;

namespace {

double monomial_integral(int m) { return m % 2 == 0 ? 2.0 / (m + 1) : 0.0; }

}  // namespace

TEST_CASE("single-point rule") {
  const LgrRule& rule = lgr_rule(1);
  CHECK(rule.nodes(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(rule.weights(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(rule.augmented_nodes(1) == 1.0);
}

TEST_CASE("two-point rule has nodes {-1, 1/3} and weights {1/2, 3/2}") {
  const LgrRule& rule = lgr_rule(2);
  CHECK(std::abs(rule.nodes(0) - (-1.0)) < 1e-13);
  CHECK(std::abs(rule.nodes(1) - 1.0 / 3.0) < 1e-13);
  CHECK(std::abs(rule.weights(0) - 0.5) < 1e-13);
  CHECK(std::abs(rule.weights(1) - 1.5) < 1e-13);
}

TEST_CASE("rule structure invariants") {
  for (int n = 1; n <= 16; ++n) {
    const LgrRule& rule = lgr_rule(n);
    CHECK(rule.nodes(0) == -1.0);
    for (int i = 1; i < n; ++i) {
      CHECK(rule.nodes(i) > rule.nodes(i - 1));
      CHECK(rule.nodes(i) < 1.0);
    }
    for (int i = 0; i < n; ++i) CHECK(rule.weights(i) > 0.0);
    CHECK(std::abs(rule.weights.sum() - 2.0) < 1e-13);
    // Residual of the defining polynomial at every node.
    for (int i = 0; i < n; ++i) {
      const double res = legendre_p(n - 1, rule.nodes(i)) + legendre_p(n, rule.nodes(i));
      CHECK(std::abs(res) < 1e-13);
    }
  }
}

TEST_CASE("quadrature exact on degree <= 2n-2") {
  for (int n = 1; n <= 16; ++n) {
    const LgrRule& rule = lgr_rule(n);
    for (int m = 0; m <= 2 * n - 2; ++m) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += rule.weights(i) * std::pow(rule.nodes(i), m);
      CHECK(std::abs(q - monomial_integral(m)) < 1e-11);
    }
  }
}

TEST_CASE("n=4 quadrature of tau^6 equals 2/7") {
  const LgrRule& rule = lgr_rule(4);
  double q = 0.0;
  for (int i = 0; i < 4; ++i) q += rule.weights(i) * std::pow(rule.nodes(i), 6);
  CHECK(q == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("differentiation matrix: n=1 gives [-1/2, 1/2]") {
  const DiffMatrix& dm = diff_matrix(1);
  REQUIRE(dm.entries.rows() == 1);
  REQUIRE(dm.entries.cols() == 2);
  CHECK(dm.entries(0, 0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(dm.entries(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("differentiation matrix rows sum to zero and monomials differentiate exactly") {
  for (int n = 1; n <= 16; ++n) {
    const LgrRule& rule = lgr_rule(n);
    const DiffMatrix& dm = diff_matrix(n);
    for (int i = 0; i < n; ++i) CHECK(std::abs(dm.entries.row(i).sum()) < 1e-10);
    for (int m = 0; m <= n; ++m) {
      Eigen::VectorXd vals(n + 1);
      for (int j = 0; j <= n; ++j) vals(j) = std::pow(rule.augmented_nodes(j), m);
      const Eigen::VectorXd deriv = dm.entries * vals;
      for (int i = 0; i < n; ++i) {
        const double want = m == 0 ? 0.0 : m * std::pow(rule.nodes(i), m - 1);
        CHECK(std::abs(deriv(i) - want) < 1e-10);
      }
    }
  }
}

TEST_CASE("n=3 differentiates tau^3 to 3 tau^2") {
  const LgrRule& rule = lgr_rule(3);
  const DiffMatrix& dm = diff_matrix(3);
  Eigen::VectorXd vals(4);
  for (int j = 0; j < 4; ++j) vals(j) = std::pow(rule.augmented_nodes(j), 3);
  const Eigen::VectorXd deriv = dm.entries * vals;
  for (int i = 0; i < 3; ++i)
    CHECK(deriv(i) == doctest::Approx(3.0 * rule.nodes(i) * rule.nodes(i)).epsilon(1e-12));
}

TEST_CASE("affine time map") {
  CHECK(map_tau_to_t(-1.0, 3.0, 9.0) == doctest::Approx(3.0));
  CHECK(map_tau_to_t(0.0, 0.0, 10.0) == doctest::Approx(5.0));
  const double tau = 0.437;
  CHECK(map_t_to_tau(map_tau_to_t(tau, 1.2, 7.7), 1.2, 7.7) == doctest::Approx(tau).epsilon(1e-15));
  CHECK_THROWS_AS(map_tau_to_t(0.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("interval rule half-widths") {
  SUBCASE("uniform 10-interval mesh") {
    const Mesh mesh = uniform_mesh(10, 4);
    for (int k = 0; k < 10; ++k)
      CHECK(interval_rule(mesh, k).half_width == doctest::Approx(0.1).epsilon(1e-14));
  }
  SUBCASE("mesh {-1, 0, 1}") {
    Mesh mesh;
    mesh.boundaries = Eigen::Vector3d(-1.0, 0.0, 1.0);
    mesh.degrees = {4, 4};
    CHECK(interval_rule(mesh, 0).half_width == doctest::Approx(0.5));
  }
  SUBCASE("mesh {-1, -0.5, 1}") {
    Mesh mesh;
    mesh.boundaries = Eigen::Vector3d(-1.0, -0.5, 1.0);
    mesh.degrees = {4, 4};
    CHECK(interval_rule(mesh, 1).half_width == doctest::Approx(0.75));
  }
  SUBCASE("index out of range") {
    const Mesh mesh = uniform_mesh(3, 4);
    CHECK_THROWS_AS(interval_rule(mesh, 3), std::out_of_range);
  }
}

TEST_CASE("degree 0 rejected") { CHECK_THROWS_AS(lgr_rule(0), std::domain_error); }
