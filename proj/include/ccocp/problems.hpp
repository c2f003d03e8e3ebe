#pragma once

#include "ccocp/ocp.hpp"
#include "ccocp/sampling.hpp"

#include <string>

namespace ccocp {

enum class Variant { chance, deterministic };

// Planar minimum-time steering problem with two waypoints and one circular
// keep-out zone. States (x, y, heading, speed), one bounded turn control.
struct Example1Params {
  double xc = 0.193, yc = 0.395;
  double radius = 0.243;
  double eps_d = 0.010;
  double delta = 0.020;
  double accel = -0.010;
  double wx1 = -0.737, wy1 = 0.911;
  double wx2 = -0.340, wy2 = 0.297;
  double sigma_max = 0.349;
  double mu1 = 0.0, mu2 = 0.0;
  double sigma1 = 0.001, sigma2 = 0.0005;
  double gate_b = 0.05;
  double x0 = -1.385, y0 = 0.499, theta0 = 0.0, v0 = 0.293;
  double xf = 0.516, yf = 0.589;
};

// Gliding-vehicle variant: states (x, y, altitude, speed, flight-path
// angle, heading), controls (bank, lift coefficient), two keep-out zones
// plus a heating-rate path constraint.
struct Example2Params {
  double xc1 = 0.008, yc1 = 0.389;
  double r1 = 0.277;
  double xc2 = 1.022, yc2 = 0.943;
  double r2 = 0.434;
  double eps_d = 0.010;
  double delta = 0.020;
  double heat_k = 0.759;
  double wx1 = -0.466, wy1 = 0.594;
  double wx2 = 0.728, wy2 = 0.580;
  double drag_b = 942.120;
  double beta = 1.400e-4;
  double r0 = 6.408e6;
  double e_star = 3.240;
  double mu1 = 0.0, mu2 = 0.0;
  double sigma1 = 0.0007, sigma2 = 0.001;
  double gate_b = 0.07;
  double x0 = -1.385, y0 = 0.499, h0 = 0.0190, gamma0 = -0.0262, v0 = 0.927, theta0 = 0.0698;
  double xf = 1.147, yf = 0.534, hf = 0.0038;
};

// Phase-3 initial-guess polyline knees, labels I-IV.
enum class GuessLabel { I, II, III, IV };
GuessLabel guess_from_name(const std::string& name);
std::string guess_name(GuessLabel label);

OcpProblem build_example1(Variant variant, const Example1Params& params = {},
                          GuessLabel guess = GuessLabel::III);
OcpProblem build_example2(Variant variant, const Example2Params& params = {});

NormalDistributionSpec example1_noise(const Example1Params& params = {});
NormalDistributionSpec example2_noise(const Example2Params& params = {});

// psi samples at a fixed probe state on the keep-out boundary; the
// normal-reference bandwidth of these defines h_base for the constraint.
Eigen::VectorXd bandwidth_probe_samples(const ChanceConstraintSpec& spec,
                                        const SampleMatrix& xi, int n_use);

struct ProblemBundle {
  OcpProblem problem;
  NormalDistributionSpec noise;
  std::string name;
  bool has_chance = false;
};

// Names: "ex1", "ex1-det", "ex2", "ex2-det".
ProblemBundle make_problem(const std::string& name, const std::string& guess_label = "III");

}  // namespace ccocp
