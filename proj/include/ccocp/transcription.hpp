#pragma once

#include "ccocp/kde.hpp"
#include "ccocp/lgr.hpp"
#include "ccocp/ocp.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <vector>

namespace ccocp {

enum class RowKind { defect, duration, path, chance, boundary, pin };

// Index map from (phase, node, component) positions to decision-vector
// slots. Adjacent phases share boundary state nodes when the problem links
// them; fixed phase times are folded into constants instead of variables.
struct VariableLayout {
  int num_vars = 0;
  int num_phases = 0;
  std::vector<int> ny, nu, num_colloc;

  // Per phase, per augmented node: base index of state component 0.
  std::vector<std::vector<int>> state_node_base;
  // Per phase: base index of the control block, ordered node-major.
  std::vector<int> control_base;
  // Time variables at the P + 1 phase boundaries; -1 marks a fixed time
  // whose value is in time_fixed.
  std::vector<int> time_var;
  std::vector<double> time_fixed;

  // Per phase: global tau of every augmented node, and per interval the
  // offset of its first node in the phase's node numbering.
  std::vector<Eigen::VectorXd> node_tau;
  std::vector<std::vector<int>> interval_node_offset;
  std::vector<Mesh> meshes;  // meshes the layout was built over

  int state_index(int phase, int node, int comp) const {
    return state_node_base[phase][node] + comp;
  }
  int control_index(int phase, int colloc_node, int comp) const {
    return control_base[phase] + colloc_node * nu[phase] + comp;
  }
  double time_value(int boundary, Eigen::Ref<const Eigen::VectorXd> x) const {
    const int v = time_var[boundary];
    return v >= 0 ? x(v) : time_fixed[boundary];
  }
};

// Sample-set binding used by the chance-constraint rows of a transcription.
// h_base is indexed by chance-constraint slot in phase-major order.
struct ChanceEvalConfig {
  const SampleMatrix* samples = nullptr;
  int n_use = 0;
  KernelSpec kernel = KernelSpec::make(KernelFamily::epanechnikov);
  double w = 1.0;
  std::vector<double> h_base;
};

struct NlpProblem {
  int num_vars = 0;
  int num_cons = 0;
  Eigen::VectorXd var_lo, var_hi;
  Eigen::VectorXd con_lo, con_hi;
  std::function<double(Eigen::Ref<const Eigen::VectorXd>)> objective;
  std::function<void(Eigen::Ref<const Eigen::VectorXd>, Eigen::Ref<Eigen::VectorXd>)> constraints;
  std::vector<std::vector<int>> row_cols;  // declared sparsity per row
  std::vector<int> objective_cols;         // empty means dense
  std::vector<RowKind> row_kind;
  VariableLayout layout;
};

struct Trajectory {
  struct Phase {
    double t0 = 0.0, tf = 0.0;
    Mesh mesh;
    Eigen::VectorXd node_tau;   // augmented nodes, global in [-1, 1]
    Eigen::VectorXd node_time;
    Eigen::MatrixXd states;     // (num_colloc + 1) x ny
    Eigen::MatrixXd controls;   // num_colloc x nu
  };
  std::vector<Phase> phases;
  double cost = 0.0;
};

// Assembles the collocated NLP: defect rows per collocation point, the
// quadrature cost, path/chance rows at collocation points, boundary rows,
// waypoint pins and phase-duration rows. Throws std::invalid_argument on
// dimension mismatches.
NlpProblem transcribe(const OcpProblem& problem, const std::vector<Mesh>& meshes,
                      const ChanceEvalConfig& chance = {});

Eigen::VectorXd seed_from_guess(const NlpProblem& nlp, const std::vector<InitialGuess>& guesses);
Trajectory extract_trajectory(const NlpProblem& nlp, Eigen::Ref<const Eigen::VectorXd> x);
Eigen::VectorXd pack_trajectory(const NlpProblem& nlp, const Trajectory& traj);

// Carries a solved trajectory onto a new mesh: states through per-interval
// Lagrange interpolation, controls piecewise-linearly over collocation
// nodes.
std::vector<InitialGuess> interpolate_solution(const Trajectory& traj,
                                               const std::vector<Mesh>& new_meshes);

// Evaluates the state interpolant of one phase at an arbitrary global tau.
Eigen::VectorXd eval_phase_state(const Trajectory::Phase& phase, double tau);
Eigen::VectorXd eval_phase_control(const Trajectory::Phase& phase, double tau);

}  // namespace ccocp
