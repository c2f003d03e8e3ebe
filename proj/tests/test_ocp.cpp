#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccocp/ocp.hpp"
#include "ccocp/problems.hpp"

using namespace ccocp;

TEST_CASE("well-formed example validates clean") {
  const OcpProblem problem = build_example1(Variant::chance);
  CHECK(validate(problem).empty());
  // Determinism of validate.
  CHECK(validate(problem) == validate(problem));
}

TEST_CASE("dimension mismatch is diagnosed") {
  OcpProblem problem = build_example1(Variant::deterministic);
  problem.phases[1].dynamics = [](Eigen::Ref<const Eigen::VectorXd> y,
                                  Eigen::Ref<const Eigen::VectorXd>, double) {
    return Eigen::VectorXd::Zero(3).eval();  // state_dim is 4
  };
  const auto diags = validate(problem);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].find("dynamics output dimension") != std::string::npos);
}

TEST_CASE("non-monotone guess breakpoints are diagnosed") {
  OcpProblem problem = build_example1(Variant::deterministic);
  problem.guess[0].breakpoints(1) = problem.guess[0].breakpoints(0);
  const auto diags = validate(problem);
  bool found = false;
  for (const auto& d : diags)
    if (d.find("strictly increasing") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("pin referencing a missing phase is diagnosed") {
  OcpProblem problem = build_example1(Variant::deterministic);
  problem.pins.push_back({7, 0, 1.0});
  const auto diags = validate(problem);
  bool found = false;
  for (const auto& d : diags)
    if (d.find("nonexistent phase") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("guess interpolation") {
  InitialGuess g;
  g.breakpoints = Eigen::Vector2d(0.0, 1.0);
  g.states.resize(2, 1);
  g.states << 0.0, 2.0;
  g.controls.resize(2, 0);

  SUBCASE("linear midpoint") {
    CHECK(evaluate_guess(g, 0.5).first(0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("exact at breakpoints") {
    CHECK(evaluate_guess(g, 0.0).first(0) == 0.0);
    CHECK(evaluate_guess(g, 1.0).first(0) == 2.0);
  }
  SUBCASE("out of range throws") {
    CHECK_THROWS_AS(evaluate_guess(g, -0.5), std::domain_error);
    CHECK_THROWS_AS(evaluate_guess(g, 1.5), std::domain_error);
  }
}

TEST_CASE("piecewise guess with three breakpoints") {
  InitialGuess g;
  g.breakpoints = Eigen::Vector3d(0.0, 1.0, 2.0);
  g.states.resize(3, 1);
  g.states << 0.0, 2.0, 2.0;
  g.controls.resize(3, 0);
  CHECK(evaluate_guess(g, 1.5).first(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(evaluate_guess(g, 0.25).first(0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("guess evaluation is continuous across breakpoints") {
  InitialGuess g;
  g.breakpoints = Eigen::Vector3d(0.0, 0.4, 2.0);
  g.states.resize(3, 2);
  g.states << 0.0, 1.0, -1.0, 3.0, 2.0, 2.0;
  g.controls.resize(3, 1);
  g.controls << 0.5, -0.5, 0.25;
  for (double bp : {0.4}) {
    const auto lo = evaluate_guess(g, bp - 1e-9);
    const auto hi = evaluate_guess(g, bp + 1e-9);
    CHECK((lo.first - hi.first).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((lo.second - hi.second).cwiseAbs().maxCoeff() < 1e-7);
  }
}
