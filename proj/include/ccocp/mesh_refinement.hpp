#pragma once

#include "ccocp/transcription.hpp"

#include <vector>

namespace ccocp {

struct RefinementOptions {
  double mesh_tol = 1e-6;
  int max_iterations = 25;
  int degree_min = 3;
  int degree_max = 16;
  int initial_intervals = 10;
  int initial_degree = 4;
  // Legendre tail/head energy ratio below which an interval is treated as
  // smooth (degree raise) rather than split.
  double smoothness_threshold = 0.1;
};

struct MeshErrorReport {
  struct PhaseErrors {
    Eigen::VectorXd interval_error;  // relative dynamics defect per interval
    Eigen::VectorXd smoothness;      // tail/head energy ratio per interval
  };
  std::vector<PhaseErrors> phases;
  double max_error = 0.0;
};

// Error estimator: in each interval the state interpolant is probed at a
// denser LGR rule of degree N_k + 1 and the dynamics defect there is
// reported relative to 1 + max |Y| per component.
MeshErrorReport estimate_error(const Trajectory& traj, const OcpProblem& problem);

// hp update: intervals over tolerance are degree-raised when smooth and
// split at the midpoint otherwise; split children keep enough points that a
// refining step never reduces the collocation count.
Mesh refine(const Mesh& mesh, const Eigen::VectorXd& interval_error,
            const Eigen::VectorXd& smoothness, const RefinementOptions& opts);

std::vector<Mesh> refine_all(const std::vector<Mesh>& meshes, const MeshErrorReport& report,
                             const RefinementOptions& opts);

}  // namespace ccocp
