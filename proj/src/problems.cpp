#include "ccocp/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace ccocp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BoundaryConstraint fix_initial(int comp, double value) {
  BoundaryConstraint bc;
  bc.fn = [comp](Eigen::Ref<const Eigen::VectorXd> y0, double, Eigen::Ref<const Eigen::VectorXd>,
                 double) { return y0(comp); };
  bc.lo = bc.hi = value;
  return bc;
}

BoundaryConstraint fix_terminal(int comp, double value) {
  BoundaryConstraint bc;
  bc.fn = [comp](Eigen::Ref<const Eigen::VectorXd>, double, Eigen::Ref<const Eigen::VectorXd> yf,
                 double) { return yf(comp); };
  bc.lo = bc.hi = value;
  return bc;
}

double segment_length(double ax, double ay, double bx, double by) {
  return std::hypot(bx - ax, by - ay);
}

}  // namespace

GuessLabel guess_from_name(const std::string& name) {
  if (name == "I" || name == "i" || name == "1") return GuessLabel::I;
  if (name == "II" || name == "ii" || name == "2") return GuessLabel::II;
  if (name == "III" || name == "iii" || name == "3") return GuessLabel::III;
  if (name == "IV" || name == "iv" || name == "4") return GuessLabel::IV;
  throw std::invalid_argument("unknown guess label: " + name);
}

std::string guess_name(GuessLabel label) {
  switch (label) {
    case GuessLabel::I: return "I";
    case GuessLabel::II: return "II";
    case GuessLabel::III: return "III";
    case GuessLabel::IV: return "IV";
  }
  return "?";
}

NormalDistributionSpec example1_noise(const Example1Params& params) {
  NormalDistributionSpec d;
  d.mean = Eigen::Vector2d(params.mu1, params.mu2);
  d.sigma = Eigen::Vector2d(params.sigma1, params.sigma2);
  return d;
}

NormalDistributionSpec example2_noise(const Example2Params& params) {
  NormalDistributionSpec d;
  d.mean = Eigen::Vector2d(params.mu1, params.mu2);
  d.sigma = Eigen::Vector2d(params.sigma1, params.sigma2);
  return d;
}

Eigen::VectorXd bandwidth_probe_samples(const ChanceConstraintSpec& spec,
                                        const SampleMatrix& xi, int n_use) {
  const int n = n_use > 0 ? std::min<int>(n_use, static_cast<int>(xi.rows()))
                          : static_cast<int>(xi.rows());
  // Probe state on the keep-out boundary, where the constraint activates.
  const double px = spec.center_x + spec.radius;
  const double py = spec.center_y;
  Eigen::VectorXd psi(n);
  for (int j = 0; j < n; ++j) psi(j) = spec.circle_margin(px, py, xi(j, 0), xi(j, 1));
  return psi;
}

OcpProblem build_example1(Variant variant, const Example1Params& params, GuessLabel guess) {
  OcpProblem problem;
  const int ny = 4;  // x, y, heading, speed
  const int nu = 1;  // turn command

  ChanceConstraintSpec keepout;
  keepout.risk = risk_split(params.eps_d, 1)(0);
  keepout.boundary = params.delta;
  keepout.ix = 0;
  keepout.iy = 1;
  keepout.center_x = params.xc;
  keepout.center_y = params.yc;
  keepout.radius = params.radius;
  keepout.gate_margin = params.gate_b;

  PathConstraint det_keepout;
  {
    const double xc = params.xc, yc = params.yc, r = params.radius;
    det_keepout.fn = [xc, yc, r](Eigen::Ref<const Eigen::VectorXd> y,
                                 Eigen::Ref<const Eigen::VectorXd>, double) {
      const double dx = y(0) - xc;
      const double dy = y(1) - yc;
      return r * r - dx * dx - dy * dy;
    };
    det_keepout.lo = -kInf;
    det_keepout.hi = 0.0;
    det_keepout.name = "keepout";
  }

  const double tan_sigma = std::tan(params.sigma_max);
  const double accel = params.accel;
  DynamicsFn dynamics = [tan_sigma, accel](Eigen::Ref<const Eigen::VectorXd> y,
                                           Eigen::Ref<const Eigen::VectorXd> u, double) {
    Eigen::VectorXd dy(4);
    const double v = y(3);
    dy(0) = v * std::cos(y(2));
    dy(1) = v * std::sin(y(2));
    dy(2) = tan_sigma / v * u(0);
    dy(3) = accel;
    return dy;
  };

  for (int p = 0; p < 3; ++p) {
    PhaseDefinition ph;
    ph.state_dim = ny;
    ph.control_dim = nu;
    ph.dynamics = dynamics;
    ph.state_bounds = {{-2.0, 2.0}, {-2.0, 2.0}, {-2.0 * M_PI, 2.0 * M_PI}, {1e-3, 2.0}};
    ph.control_bounds = {{-1.0, 1.0}};
    ph.start_time_bounds = p == 0 ? Interval{0.0, 0.0} : Interval{0.01, 60.0};
    ph.end_time_bounds = Interval{0.01, 60.0};
    ph.min_duration = 0.05;
    ph.max_duration = 60.0;
    if (variant == Variant::chance) ph.chance_constraints.push_back(keepout);
    else ph.path_constraints.push_back(det_keepout);
    problem.phases.push_back(std::move(ph));
  }

  problem.mayer = [](Eigen::Ref<const Eigen::VectorXd>, double, Eigen::Ref<const Eigen::VectorXd>,
                     double tf) { return tf; };

  problem.boundary_constraints = {
      fix_initial(0, params.x0), fix_initial(1, params.y0), fix_initial(2, params.theta0),
      fix_initial(3, params.v0), fix_terminal(0, params.xf), fix_terminal(1, params.yf)};

  problem.pins = {{0, 0, params.wx1}, {0, 1, params.wy1}, {1, 0, params.wx2}, {1, 1, params.wy2}};

  // Straight-line guesses: waypoint-to-waypoint positions, constant heading
  // and speed from the initial condition, zero control, segment times from
  // distance over initial speed. The phase-3 (x, y) guess is the two-segment
  // polyline through the labelled knee.
  double kx = 0.0, ky = 0.0;
  switch (guess) {
    case GuessLabel::I: kx = 0.175; ky = 0.611; break;
    case GuessLabel::II: kx = 0.175; ky = 0.785; break;
    case GuessLabel::III: kx = 0.175; ky = 0.960; break;
    case GuessLabel::IV: kx = 0.349; ky = 0.960; break;
  }

  const double v0 = params.v0;
  const double t1 = segment_length(params.x0, params.y0, params.wx1, params.wy1) / v0;
  const double t2 = t1 + segment_length(params.wx1, params.wy1, params.wx2, params.wy2) / v0;
  const double dA = segment_length(params.wx2, params.wy2, kx, ky);
  const double dB = segment_length(kx, ky, params.xf, params.yf);
  const double t3a = t2 + dA / v0;
  const double t3 = t3a + dB / v0;

  auto state4 = [&](double x, double y) {
    Eigen::VectorXd s(4);
    s << x, y, params.theta0, v0;
    return s;
  };
  const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(1);

  problem.guess.resize(3);
  problem.guess[0] = straight_line_guess(Eigen::Vector2d(0.0, t1), state4(params.x0, params.y0),
                                         state4(params.wx1, params.wy1), u0, u0);
  problem.guess[1] = straight_line_guess(Eigen::Vector2d(t1, t2), state4(params.wx1, params.wy1),
                                         state4(params.wx2, params.wy2), u0, u0);
  {
    InitialGuess g;
    g.breakpoints = Eigen::Vector3d(t2, t3a, t3);
    g.states.resize(3, ny);
    g.states.row(0) = state4(params.wx2, params.wy2).transpose();
    g.states.row(1) = state4(kx, ky).transpose();
    g.states.row(2) = state4(params.xf, params.yf).transpose();
    g.controls = Eigen::MatrixXd::Zero(3, 1);
    problem.guess[2] = g;
  }

  return problem;
}

OcpProblem build_example2(Variant variant, const Example2Params& params) {
  OcpProblem problem;
  const int ny = 6;  // x, y, altitude, speed, flight-path angle, heading
  const int nu = 2;  // bank angle, lift coefficient

  ChanceConstraintSpec keepout2;
  keepout2.risk = risk_split(params.eps_d, 1)(0);
  keepout2.boundary = params.delta;
  keepout2.ix = 0;
  keepout2.iy = 1;
  keepout2.center_x = params.xc2;
  keepout2.center_y = params.yc2;
  keepout2.radius = params.r2;
  keepout2.gate_margin = params.gate_b;

  PathConstraint det_keepout2;
  {
    const double xc = params.xc2, yc = params.yc2, r = params.r2;
    det_keepout2.fn = [xc, yc, r](Eigen::Ref<const Eigen::VectorXd> y,
                                  Eigen::Ref<const Eigen::VectorXd>, double) {
      const double dx = y(0) - xc;
      const double dy = y(1) - yc;
      return r * r - dx * dx - dy * dy;
    };
    det_keepout2.lo = -kInf;
    det_keepout2.hi = 0.0;
    det_keepout2.name = "keepout2";
  }

  PathConstraint keepout1;
  {
    const double xc = params.xc1, yc = params.yc1, r = params.r1;
    keepout1.fn = [xc, yc, r](Eigen::Ref<const Eigen::VectorXd> y,
                              Eigen::Ref<const Eigen::VectorXd>, double) {
      const double dx = y(0) - xc;
      const double dy = y(1) - yc;
      return r * r - dx * dx - dy * dy;
    };
    keepout1.lo = -kInf;
    keepout1.hi = 0.0;
    keepout1.name = "keepout1";
  }

  PathConstraint heating;
  {
    const double k = params.heat_k;
    const double br0 = params.beta * params.r0;
    heating.fn = [k, br0](Eigen::Ref<const Eigen::VectorXd> y,
                          Eigen::Ref<const Eigen::VectorXd>, double) {
      const double v = y(3);
      return k * std::exp(-0.5 * br0 * y(2)) * v * v * v - 1.0;
    };
    heating.lo = -kInf;
    heating.hi = 0.0;
    heating.name = "heating";
  }

  const double drag_b = params.drag_b;
  const double br0 = params.beta * params.r0;
  const double two_estar = 2.0 * params.e_star;
  DynamicsFn dynamics = [drag_b, br0, two_estar](Eigen::Ref<const Eigen::VectorXd> y,
                                                 Eigen::Ref<const Eigen::VectorXd> u, double) {
    Eigen::VectorXd dy(6);
    const double v = y(3);
    const double gamma = y(4);
    const double theta = y(5);
    const double bank = u(0);
    const double cl = u(1);
    const double rho_term = drag_b * std::exp(-br0 * y(2));
    dy(0) = v * std::cos(theta);
    dy(1) = v * std::sin(theta);
    dy(2) = v * gamma;
    dy(3) = -drag_b * v * v * std::exp(-br0 * y(2) * (1.0 + cl * cl)) / two_estar;
    dy(4) = rho_term * v * cl * std::cos(bank) - 1.0 / v + v;
    dy(5) = rho_term * v * cl * std::sin(bank);
    return dy;
  };

  for (int p = 0; p < 4; ++p) {
    PhaseDefinition ph;
    ph.state_dim = ny;
    ph.control_dim = nu;
    ph.dynamics = dynamics;
    ph.state_bounds = {{-2.0, 2.0},          {-2.0, 2.0},           {0.0, 0.05},
                       {1e-3, 2.0},          {-0.5 * M_PI, 0.5 * M_PI},
                       {-2.0 * M_PI, 2.0 * M_PI}};
    ph.control_bounds = {{-M_PI / 3.0, M_PI / 3.0}, {0.0, 2.0}};
    ph.start_time_bounds = p == 0 ? Interval{0.0, 0.0} : Interval{0.01, 60.0};
    ph.end_time_bounds = Interval{0.01, 60.0};
    ph.min_duration = 0.05;
    ph.max_duration = 60.0;
    ph.path_constraints.push_back(keepout1);
    ph.path_constraints.push_back(heating);
    if (variant == Variant::chance) ph.chance_constraints.push_back(keepout2);
    else ph.path_constraints.push_back(det_keepout2);
    problem.phases.push_back(std::move(ph));
  }

  problem.mayer = [](Eigen::Ref<const Eigen::VectorXd>, double, Eigen::Ref<const Eigen::VectorXd>,
                     double tf) { return tf; };

  problem.boundary_constraints = {fix_initial(0, params.x0),     fix_initial(1, params.y0),
                                  fix_initial(2, params.h0),     fix_initial(3, params.v0),
                                  fix_initial(4, params.gamma0), fix_initial(5, params.theta0),
                                  fix_terminal(0, params.xf),    fix_terminal(1, params.yf),
                                  fix_terminal(2, params.hf)};

  // Waypoints pin the ends of phases 2 and 3; phase 1's terminal point is
  // free (see README on the heating-boundary event).
  problem.pins = {{1, 0, params.wx1}, {1, 1, params.wy1}, {2, 0, params.wx2}, {2, 1, params.wy2}};

  // Straight-line guesses; phase 1 covers the first quarter of the leg to
  // waypoint 1. Altitude descends linearly in cumulative path fraction,
  // speed/angles stay at their initial values, lift guess sits mid-range.
  const double q1x = params.x0 + 0.25 * (params.wx1 - params.x0);
  const double q1y = params.y0 + 0.25 * (params.wy1 - params.y0);
  const double l1 = segment_length(params.x0, params.y0, q1x, q1y);
  const double l2 = segment_length(q1x, q1y, params.wx1, params.wy1);
  const double l3 = segment_length(params.wx1, params.wy1, params.wx2, params.wy2);
  const double l4 = segment_length(params.wx2, params.wy2, params.xf, params.yf);
  const double total = l1 + l2 + l3 + l4;
  const double v0 = params.v0;

  auto state6 = [&](double x, double y, double frac) {
    Eigen::VectorXd s(6);
    s << x, y, params.h0 + frac * (params.hf - params.h0), v0, params.gamma0, params.theta0;
    return s;
  };
  Eigen::VectorXd ug(2);
  ug << 0.0, 0.5;

  const double t1 = l1 / v0;
  const double t2 = t1 + l2 / v0;
  const double t3 = t2 + l3 / v0;
  const double t4 = t3 + l4 / v0;

  problem.guess.resize(4);
  problem.guess[0] = straight_line_guess(Eigen::Vector2d(0.0, t1), state6(params.x0, params.y0, 0.0),
                                         state6(q1x, q1y, l1 / total), ug, ug);
  problem.guess[1] =
      straight_line_guess(Eigen::Vector2d(t1, t2), state6(q1x, q1y, l1 / total),
                          state6(params.wx1, params.wy1, (l1 + l2) / total), ug, ug);
  problem.guess[2] =
      straight_line_guess(Eigen::Vector2d(t2, t3), state6(params.wx1, params.wy1, (l1 + l2) / total),
                          state6(params.wx2, params.wy2, (l1 + l2 + l3) / total), ug, ug);
  problem.guess[3] =
      straight_line_guess(Eigen::Vector2d(t3, t4),
                          state6(params.wx2, params.wy2, (l1 + l2 + l3) / total),
                          state6(params.xf, params.yf, 1.0), ug, ug);

  return problem;
}

ProblemBundle make_problem(const std::string& name, const std::string& guess_label) {
  ProblemBundle bundle;
  bundle.name = name;
  if (name == "ex1" || name == "ex1-det") {
    const Variant variant = name == "ex1" ? Variant::chance : Variant::deterministic;
    bundle.problem = build_example1(variant, {}, guess_from_name(guess_label));
    bundle.noise = example1_noise({});
    bundle.has_chance = variant == Variant::chance;
  } else if (name == "ex2" || name == "ex2-det") {
    const Variant variant = name == "ex2" ? Variant::chance : Variant::deterministic;
    bundle.problem = build_example2(variant, {});
    bundle.noise = example2_noise({});
    bundle.has_chance = variant == Variant::chance;
  } else {
    throw std::invalid_argument("unknown problem name: " + name);
  }
  return bundle;
}

}  // namespace ccocp
