#include "ccocp/ocp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ccocp {

namespace {

bool finite_interval_ok(const Interval& iv) { return !(iv.lo > iv.hi); }

}  // namespace

std::vector<std::string> validate(const OcpProblem& problem) {
  std::vector<std::string> diags;
  auto report = [&](int phase, const std::string& msg) {
    std::ostringstream os;
    os << "phase " << phase << ": " << msg;
    diags.push_back(os.str());
  };

  if (problem.phases.empty()) {
    diags.push_back("problem has no phases");
    return diags;
  }
  const bool guesses_present = problem.guess.size() == problem.phases.size();
  if (!problem.guess.empty() && !guesses_present)
    diags.push_back("guess count does not match phase count");

  for (int p = 0; p < problem.num_phases(); ++p) {
    const PhaseDefinition& ph = problem.phases[p];
    if (ph.state_dim < 1) report(p, "state_dim must be >= 1");
    if (ph.control_dim < 0) report(p, "control_dim must be >= 0");
    if (!ph.dynamics) report(p, "dynamics callback missing");
    if (static_cast<int>(ph.state_bounds.size()) != ph.state_dim)
      report(p, "state_bounds size mismatch");
    if (static_cast<int>(ph.control_bounds.size()) != ph.control_dim)
      report(p, "control_bounds size mismatch");
    for (const auto& iv : ph.state_bounds)
      if (!finite_interval_ok(iv)) report(p, "state bound has min > max");
    for (const auto& iv : ph.control_bounds)
      if (!finite_interval_ok(iv)) report(p, "control bound has min > max");
    if (!finite_interval_ok(ph.start_time_bounds) || !finite_interval_ok(ph.end_time_bounds))
      report(p, "time bound has min > max");
    for (const auto& cc : ph.chance_constraints) {
      if (!(cc.risk > 0.0)) report(p, "chance constraint risk must be positive");
      if (cc.ix < 0 || cc.ix >= ph.state_dim || cc.iy < 0 || cc.iy >= ph.state_dim)
        report(p, "chance constraint gate components out of range");
    }

    if (guesses_present) {
      const InitialGuess& g = problem.guess[p];
      const Eigen::Index nb = g.breakpoints.size();
      if (nb < 2) {
        report(p, "guess needs at least 2 breakpoints");
        continue;
      }
      bool monotone = true;
      for (Eigen::Index i = 1; i < nb; ++i)
        if (!(g.breakpoints(i) > g.breakpoints(i - 1))) monotone = false;
      if (!monotone) report(p, "guess breakpoints are not strictly increasing");
      if (g.states.rows() != nb || g.states.cols() != ph.state_dim)
        report(p, "guess state samples do not match breakpoints/state_dim");
      if (ph.control_dim > 0 && (g.controls.rows() != nb || g.controls.cols() != ph.control_dim))
        report(p, "guess control samples do not match breakpoints/control_dim");

      // Probe callback dimensions at the guess midpoint.
      if (monotone && ph.dynamics && g.states.rows() == nb && g.states.cols() == ph.state_dim) {
        const double tm = 0.5 * (g.breakpoints(0) + g.breakpoints(nb - 1));
        auto [y, u] = evaluate_guess(g, tm);
        if (u.size() != ph.control_dim) u = Eigen::VectorXd::Zero(ph.control_dim);
        const Eigen::VectorXd dy = ph.dynamics(y, u, tm);
        if (dy.size() != ph.state_dim) {
          std::ostringstream os;
          os << "dynamics output dimension " << dy.size() << " does not match state_dim "
             << ph.state_dim;
          report(p, os.str());
        }
        if (ph.lagrangian) (void)ph.lagrangian(y, u, tm);
        for (std::size_t c = 0; c < ph.path_constraints.size(); ++c) {
          if (!ph.path_constraints[c].fn) report(p, "path constraint callback missing");
        }
      }
    }
  }

  for (const auto& pin : problem.pins) {
    if (pin.phase < 0 || pin.phase >= problem.num_phases()) {
      diags.push_back("pin references a nonexistent phase");
    } else if (pin.component < 0 ||
               pin.component >= problem.phases[pin.phase].state_dim) {
      diags.push_back("pin references a nonexistent state component");
    }
  }
  return diags;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> evaluate_guess(const InitialGuess& guess, double t) {
  const Eigen::Index nb = guess.breakpoints.size();
  if (nb < 1) throw std::domain_error("evaluate_guess: empty guess");
  const double lo = guess.breakpoints(0);
  const double hi = guess.breakpoints(nb - 1);
  const double slack = 1e-9 * (1.0 + std::abs(hi - lo));
  if (t < lo - slack || t > hi + slack)
    throw std::domain_error("evaluate_guess: t outside the guess span");
  t = std::min(std::max(t, lo), hi);

  Eigen::Index k = 0;
  while (k + 2 < nb && t > guess.breakpoints(k + 1)) ++k;
  const double t0 = guess.breakpoints(k);
  const double t1 = guess.breakpoints(k + 1);
  const double a = (t1 > t0) ? (t - t0) / (t1 - t0) : 0.0;

  Eigen::VectorXd y = (1.0 - a) * guess.states.row(k).transpose() +
                      a * guess.states.row(k + 1).transpose();
  Eigen::VectorXd u;
  if (guess.controls.rows() == nb && guess.controls.cols() > 0) {
    u = (1.0 - a) * guess.controls.row(k).transpose() +
        a * guess.controls.row(k + 1).transpose();
  } else {
    u.resize(0);
  }
  return {std::move(y), std::move(u)};
}

InitialGuess straight_line_guess(const Eigen::VectorXd& breakpoints,
                                 const Eigen::VectorXd& state_start,
                                 const Eigen::VectorXd& state_end,
                                 const Eigen::VectorXd& control_start,
                                 const Eigen::VectorXd& control_end) {
  InitialGuess g;
  g.breakpoints = breakpoints;
  const Eigen::Index nb = breakpoints.size();
  g.states.resize(nb, state_start.size());
  g.controls.resize(nb, control_start.size());
  for (Eigen::Index i = 0; i < nb; ++i) {
    const double a = (nb > 1) ? static_cast<double>(i) / static_cast<double>(nb - 1) : 0.0;
    g.states.row(i) = ((1.0 - a) * state_start + a * state_end).transpose();
    if (control_start.size() > 0)
      g.controls.row(i) = ((1.0 - a) * control_start + a * control_end).transpose();
  }
  return g;
}

}  // namespace ccocp
