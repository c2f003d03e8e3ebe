#pragma once

#include "ccocp/kde.hpp"

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace ccocp {

using DynamicsFn = std::function<Eigen::VectorXd(
    Eigen::Ref<const Eigen::VectorXd> y, Eigen::Ref<const Eigen::VectorXd> u, double t)>;
using PathFn = std::function<double(
    Eigen::Ref<const Eigen::VectorXd> y, Eigen::Ref<const Eigen::VectorXd> u, double t)>;
using EndpointFn = std::function<double(
    Eigen::Ref<const Eigen::VectorXd> y0, double t0, Eigen::Ref<const Eigen::VectorXd> yf, double tf)>;

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

struct PathConstraint {
  PathFn fn;
  double lo = 0.0;
  double hi = 0.0;
  std::string name;
};

struct BoundaryConstraint {
  EndpointFn fn;
  double lo = 0.0;
  double hi = 0.0;
  std::string name;
};

// Piecewise-linear node samples used both for user-supplied guesses and for
// carrying a solved trajectory onto the next mesh.
struct InitialGuess {
  Eigen::VectorXd breakpoints;  // strictly increasing times
  Eigen::MatrixXd states;       // breakpoints x state_dim
  Eigen::MatrixXd controls;     // breakpoints x control_dim
};

struct PhaseDefinition {
  int state_dim = 0;
  int control_dim = 0;
  DynamicsFn dynamics;
  PathFn lagrangian;  // null for problems without a running cost
  std::vector<PathConstraint> path_constraints;
  std::vector<ChanceConstraintSpec> chance_constraints;
  std::vector<Interval> state_bounds;    // size state_dim
  std::vector<Interval> control_bounds;  // size control_dim
  Interval start_time_bounds;
  Interval end_time_bounds;
  double min_duration = 1e-3;
  double max_duration = std::numeric_limits<double>::infinity();
};

// Event/waypoint constraint pinning one state component at a phase's
// terminal point.
struct TerminalPin {
  int phase = 0;
  int component = 0;
  double value = 0.0;
};

struct OcpProblem {
  std::vector<PhaseDefinition> phases;
  EndpointFn mayer;  // endpoint cost M(y(start), t0, y(end), tf); null allowed
  std::vector<BoundaryConstraint> boundary_constraints;
  std::vector<TerminalPin> pins;
  // When true, adjacent phases share their boundary state and time
  // variables (continuity by aliasing at the transcription level).
  bool link_phase_states = true;
  std::vector<InitialGuess> guess;  // one per phase

  int num_phases() const { return static_cast<int>(phases.size()); }
};

// Returns diagnostics; empty iff the problem is well formed. Dimension
// consistency of user callbacks is probed at the guess midpoint.
std::vector<std::string> validate(const OcpProblem& problem);

// Piecewise-linear interpolation of a guess; throws std::domain_error for t
// outside the breakpoint span.
std::pair<Eigen::VectorXd, Eigen::VectorXd> evaluate_guess(const InitialGuess& guess, double t);

InitialGuess straight_line_guess(const Eigen::VectorXd& breakpoints,
                                 const Eigen::VectorXd& state_start,
                                 const Eigen::VectorXd& state_end,
                                 const Eigen::VectorXd& control_start,
                                 const Eigen::VectorXd& control_end);

}  // namespace ccocp
