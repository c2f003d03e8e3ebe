#include "ccocp/transcription.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace ccocp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

struct Assembly {
  OcpProblem problem;
  ChanceEvalConfig chance;
  VariableLayout layout;
  std::vector<int> chance_slot_base;  // per phase
  int num_cons = 0;
};

VariableLayout build_layout(const OcpProblem& problem, const std::vector<Mesh>& meshes) {
  const int P = problem.num_phases();
  VariableLayout L;
  L.num_phases = P;
  L.ny.resize(P);
  L.nu.resize(P);
  L.num_colloc.resize(P);
  L.state_node_base.resize(P);
  L.control_base.resize(P);
  L.node_tau.resize(P);
  L.interval_node_offset.resize(P);
  L.meshes = meshes;

  int next = 0;
  for (int p = 0; p < P; ++p) {
    const PhaseDefinition& ph = problem.phases[p];
    const Mesh& mesh = meshes[p];
    L.ny[p] = ph.state_dim;
    L.nu[p] = ph.control_dim;
    L.num_colloc[p] = mesh.total_collocation();
    const int nodes = L.num_colloc[p] + 1;

    L.state_node_base[p].resize(nodes);
    for (int node = 0; node < nodes; ++node) {
      const bool aliased = node == 0 && p > 0 && problem.link_phase_states &&
                           problem.phases[p - 1].state_dim == ph.state_dim;
      if (aliased) {
        L.state_node_base[p][0] = L.state_node_base[p - 1].back();
      } else {
        L.state_node_base[p][node] = next;
        next += ph.state_dim;
      }
    }
    L.control_base[p] = next;
    next += ph.control_dim * L.num_colloc[p];

    // Global tau of each augmented node; interior interval boundaries are
    // shared between neighbouring intervals.
    L.node_tau[p].resize(nodes);
    L.interval_node_offset[p].resize(mesh.intervals());
    int off = 0;
    for (int k = 0; k < mesh.intervals(); ++k) {
      const IntervalRule ir = interval_rule(mesh, k);
      L.interval_node_offset[p][k] = off;
      for (int i = 0; i < ir.rule->n; ++i) {
        L.node_tau[p](off + i) = ir.tau_lo + (ir.rule->nodes(i) + 1.0) * ir.half_width;
      }
      off += ir.rule->n;
    }
    L.node_tau[p](L.num_colloc[p]) = 1.0;
  }

  // Time variables at phase boundaries; adjacent phases always share the
  // boundary time. Fixed (degenerate) bounds become constants.
  L.time_var.assign(P + 1, -1);
  L.time_fixed.assign(P + 1, 0.0);
  for (int b = 0; b <= P; ++b) {
    Interval iv;
    if (b == 0) iv = problem.phases[0].start_time_bounds;
    else if (b == P) iv = problem.phases[P - 1].end_time_bounds;
    else iv = intersect(problem.phases[b - 1].end_time_bounds, problem.phases[b].start_time_bounds);
    if (iv.lo > iv.hi) throw std::invalid_argument("transcribe: empty time-bound intersection");
    if (iv.lo == iv.hi) {
      L.time_fixed[b] = iv.lo;
    } else {
      L.time_var[b] = next++;
    }
  }
  L.num_vars = next;
  return L;
}

// Fills variable bounds from phase state/control bounds and the merged
// time-boundary intervals; aliased nodes take the intersection.
void fill_var_bounds(const OcpProblem& problem, const VariableLayout& L, Eigen::VectorXd& lo,
                     Eigen::VectorXd& hi) {
  lo = Eigen::VectorXd::Constant(L.num_vars, -kInf);
  hi = Eigen::VectorXd::Constant(L.num_vars, kInf);
  const int P = L.num_phases;
  for (int p = 0; p < P; ++p) {
    const PhaseDefinition& ph = problem.phases[p];
    const int nodes = L.num_colloc[p] + 1;
    // Aliased boundary nodes are visited by both phases, which intersects
    // their bounds.
    for (int node = 0; node < nodes; ++node) {
      for (int c = 0; c < L.ny[p]; ++c) {
        const int v = L.state_index(p, node, c);
        lo(v) = std::max(lo(v), ph.state_bounds[c].lo);
        hi(v) = std::min(hi(v), ph.state_bounds[c].hi);
      }
    }
    for (int cn = 0; cn < L.num_colloc[p]; ++cn) {
      for (int c = 0; c < L.nu[p]; ++c) {
        const int v = L.control_index(p, cn, c);
        lo(v) = ph.control_bounds[c].lo;
        hi(v) = ph.control_bounds[c].hi;
      }
    }
  }
  for (int b = 0; b <= P; ++b) {
    if (L.time_var[b] < 0) continue;
    Interval iv;
    if (b == 0) iv = problem.phases[0].start_time_bounds;
    else if (b == P) iv = problem.phases[P - 1].end_time_bounds;
    else iv = intersect(problem.phases[b - 1].end_time_bounds, problem.phases[b].start_time_bounds);
    lo(L.time_var[b]) = iv.lo;
    hi(L.time_var[b]) = iv.hi;
  }
}

}  // namespace

NlpProblem transcribe(const OcpProblem& problem, const std::vector<Mesh>& meshes,
                      const ChanceEvalConfig& chance) {
  {
    const auto diags = validate(problem);
    if (!diags.empty()) {
      std::ostringstream os;
      os << "transcribe: problem failed validation:";
      for (const auto& d : diags) os << "\n  " << d;
      throw std::invalid_argument(os.str());
    }
  }
  if (static_cast<int>(meshes.size()) != problem.num_phases())
    throw std::invalid_argument("transcribe: one mesh per phase required");

  auto asmbl = std::make_shared<Assembly>();
  asmbl->problem = problem;
  asmbl->chance = chance;
  asmbl->layout = build_layout(problem, meshes);
  const VariableLayout& L = asmbl->layout;
  const int P = L.num_phases;

  // Chance slots in phase-major order; each needs a bandwidth.
  int total_cc = 0;
  asmbl->chance_slot_base.resize(P);
  for (int p = 0; p < P; ++p) {
    asmbl->chance_slot_base[p] = total_cc;
    total_cc += static_cast<int>(problem.phases[p].chance_constraints.size());
  }
  if (total_cc > 0) {
    if (chance.samples == nullptr || chance.samples->rows() < 1)
      throw std::invalid_argument("transcribe: chance constraints need a sample set");
    if (static_cast<int>(chance.h_base.size()) != total_cc)
      throw std::invalid_argument("transcribe: chance config must carry one bandwidth per slot");
    if (!(chance.w >= 1.0))
      throw std::invalid_argument("transcribe: bandwidth multiplier must be >= 1");
  }

  NlpProblem nlp;
  nlp.layout = L;
  nlp.num_vars = L.num_vars;
  fill_var_bounds(problem, L, nlp.var_lo, nlp.var_hi);

  // Row bookkeeping. Order: per phase defects, then path rows, then chance
  // rows; afterwards per-phase duration rows, boundary rows and pins.
  std::vector<double> clo, chi;
  auto add_row = [&](RowKind kind, double lo, double hi, std::vector<int> cols) {
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    nlp.row_kind.push_back(kind);
    clo.push_back(lo);
    chi.push_back(hi);
    nlp.row_cols.push_back(std::move(cols));
  };

  for (int p = 0; p < P; ++p) {
    const PhaseDefinition& ph = problem.phases[p];
    const Mesh& mesh = meshes[p];
    std::vector<int> time_cols;
    if (L.time_var[p] >= 0) time_cols.push_back(L.time_var[p]);
    if (L.time_var[p + 1] >= 0) time_cols.push_back(L.time_var[p + 1]);

    for (int k = 0; k < mesh.intervals(); ++k) {
      const int nk = mesh.degrees[k];
      const int off = L.interval_node_offset[p][k];
      std::vector<int> interval_cols = time_cols;
      for (int j = 0; j <= nk; ++j)
        for (int c = 0; c < L.ny[p]; ++c) interval_cols.push_back(L.state_index(p, off + j, c));
      for (int i = 0; i < nk; ++i) {
        std::vector<int> cols = interval_cols;
        for (int c = 0; c < L.nu[p]; ++c) cols.push_back(L.control_index(p, off + i, c));
        for (int c = 0; c < L.ny[p]; ++c) add_row(RowKind::defect, 0.0, 0.0, cols);
      }
    }

    for (int cn = 0; cn < L.num_colloc[p]; ++cn) {
      std::vector<int> cols = time_cols;
      for (int c = 0; c < L.ny[p]; ++c) cols.push_back(L.state_index(p, cn, c));
      for (int c = 0; c < L.nu[p]; ++c) cols.push_back(L.control_index(p, cn, c));
      for (const auto& pc : ph.path_constraints) add_row(RowKind::path, pc.lo, pc.hi, cols);
      for (const auto& cc : ph.chance_constraints)
        add_row(RowKind::chance, -kInf, cc.risk, cols);
    }
  }

  for (int p = 0; p < P; ++p) {
    if (L.time_var[p] < 0 && L.time_var[p + 1] < 0) {
      const double dur = L.time_fixed[p + 1] - L.time_fixed[p];
      if (!(dur > 0.0)) throw std::invalid_argument("transcribe: fixed phase has nonpositive duration");
      continue;
    }
    std::vector<int> cols;
    if (L.time_var[p] >= 0) cols.push_back(L.time_var[p]);
    if (L.time_var[p + 1] >= 0) cols.push_back(L.time_var[p + 1]);
    add_row(RowKind::duration, problem.phases[p].min_duration, problem.phases[p].max_duration,
            cols);
  }

  {
    std::vector<int> cols;
    for (int c = 0; c < L.ny[0]; ++c) cols.push_back(L.state_index(0, 0, c));
    for (int c = 0; c < L.ny[P - 1]; ++c)
      cols.push_back(L.state_index(P - 1, L.num_colloc[P - 1], c));
    if (L.time_var[0] >= 0) cols.push_back(L.time_var[0]);
    if (L.time_var[P] >= 0) cols.push_back(L.time_var[P]);
    for (const auto& bc : problem.boundary_constraints)
      add_row(RowKind::boundary, bc.lo, bc.hi, cols);
  }

  for (const auto& pin : problem.pins) {
    const int v = L.state_index(pin.phase, L.num_colloc[pin.phase], pin.component);
    add_row(RowKind::pin, pin.value, pin.value, {v});
  }

  nlp.num_cons = static_cast<int>(clo.size());
  asmbl->num_cons = nlp.num_cons;
  nlp.con_lo = Eigen::Map<Eigen::VectorXd>(clo.data(), nlp.num_cons);
  nlp.con_hi = Eigen::Map<Eigen::VectorXd>(chi.data(), nlp.num_cons);

  nlp.constraints = [asmbl](Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<Eigen::VectorXd> out) {
    const VariableLayout& L = asmbl->layout;
    const OcpProblem& prob = asmbl->problem;
    const int P = L.num_phases;
    Eigen::Index row = 0;

    for (int p = 0; p < P; ++p) {
      const PhaseDefinition& ph = prob.phases[p];
      const Mesh& mesh = L.meshes[p];
      const double t0 = L.time_value(p, x);
      const double tf = L.time_value(p + 1, x);
      const double tscale = 0.5 * (tf - t0);
      const double tmid = 0.5 * (tf + t0);
      const int ny = L.ny[p];
      const int nu = L.nu[p];

      for (int k = 0; k < mesh.intervals(); ++k) {
        const IntervalRule ir = interval_rule(mesh, k);
        const int nk = ir.rule->n;
        const int off = L.interval_node_offset[p][k];
        Eigen::MatrixXd ynodes(nk + 1, ny);
        for (int j = 0; j <= nk; ++j)
          for (int c = 0; c < ny; ++c) ynodes(j, c) = x(L.state_index(p, off + j, c));
        const Eigen::MatrixXd dY = ir.dmat->entries * ynodes;  // nk x ny
        for (int i = 0; i < nk; ++i) {
          const int cn = off + i;
          const Eigen::Map<const Eigen::VectorXd> y(x.data() + L.state_index(p, cn, 0), ny);
          const Eigen::Map<const Eigen::VectorXd> u(
              nu > 0 ? x.data() + L.control_index(p, cn, 0) : x.data(), nu);
          const double t = tscale * L.node_tau[p](cn) + tmid;
          const Eigen::VectorXd a = ph.dynamics(y, u, t);
          for (int c = 0; c < ny; ++c)
            out(row + c) = dY(i, c) - ir.half_width * tscale * a(c);
          row += ny;
        }
      }

      for (int cn = 0; cn < L.num_colloc[p]; ++cn) {
        const Eigen::Map<const Eigen::VectorXd> y(x.data() + L.state_index(p, cn, 0), ny);
        const Eigen::Map<const Eigen::VectorXd> u(
            nu > 0 ? x.data() + L.control_index(p, cn, 0) : x.data(), nu);
        const double t = tscale * L.node_tau[p](cn) + tmid;
        for (const auto& pc : ph.path_constraints) out(row++) = pc.fn(y, u, t);
        for (std::size_t ci = 0; ci < ph.chance_constraints.size(); ++ci) {
          const auto& cc = ph.chance_constraints[ci];
          const int slot = asmbl->chance_slot_base[p] + static_cast<int>(ci);
          const BandwidthState bw{asmbl->chance.h_base[slot], asmbl->chance.w};
          out(row++) = gated_constraint(y, u, t, cc, *asmbl->chance.samples,
                                        asmbl->chance.n_use, bw, asmbl->chance.kernel);
        }
      }
    }

    for (int p = 0; p < P; ++p) {
      if (L.time_var[p] < 0 && L.time_var[p + 1] < 0) continue;
      out(row++) = L.time_value(p + 1, x) - L.time_value(p, x);
    }

    if (!prob.boundary_constraints.empty()) {
      const Eigen::Map<const Eigen::VectorXd> y0(x.data() + L.state_index(0, 0, 0), L.ny[0]);
      const Eigen::Map<const Eigen::VectorXd> yf(
          x.data() + L.state_index(P - 1, L.num_colloc[P - 1], 0), L.ny[P - 1]);
      const double t0 = L.time_value(0, x);
      const double tf = L.time_value(P, x);
      for (const auto& bc : prob.boundary_constraints) out(row++) = bc.fn(y0, t0, yf, tf);
    }

    for (const auto& pin : prob.pins)
      out(row++) = x(L.state_index(pin.phase, L.num_colloc[pin.phase], pin.component));
  };

  nlp.objective = [asmbl](Eigen::Ref<const Eigen::VectorXd> x) -> double {
    const VariableLayout& L = asmbl->layout;
    const OcpProblem& prob = asmbl->problem;
    const int P = L.num_phases;
    double J = 0.0;
    if (prob.mayer) {
      const Eigen::Map<const Eigen::VectorXd> y0(x.data() + L.state_index(0, 0, 0), L.ny[0]);
      const Eigen::Map<const Eigen::VectorXd> yf(
          x.data() + L.state_index(P - 1, L.num_colloc[P - 1], 0), L.ny[P - 1]);
      J += prob.mayer(y0, L.time_value(0, x), yf, L.time_value(P, x));
    }
    for (int p = 0; p < P; ++p) {
      const PhaseDefinition& ph = prob.phases[p];
      if (!ph.lagrangian) continue;
      const Mesh& mesh = L.meshes[p];
      const double t0 = L.time_value(p, x);
      const double tf = L.time_value(p + 1, x);
      const double tscale = 0.5 * (tf - t0);
      const double tmid = 0.5 * (tf + t0);
      for (int k = 0; k < mesh.intervals(); ++k) {
        const IntervalRule ir = interval_rule(mesh, k);
        const int off = L.interval_node_offset[p][k];
        for (int i = 0; i < ir.rule->n; ++i) {
          const int cn = off + i;
          const Eigen::Map<const Eigen::VectorXd> y(x.data() + L.state_index(p, cn, 0), L.ny[p]);
          const Eigen::Map<const Eigen::VectorXd> u(
              L.nu[p] > 0 ? x.data() + L.control_index(p, cn, 0) : x.data(), L.nu[p]);
          const double t = tscale * L.node_tau[p](cn) + tmid;
          J += ir.half_width * tscale * ir.rule->weights(i) * ph.lagrangian(y, u, t);
        }
      }
    }
    return J;
  };

  // With no running cost the objective touches only the endpoint states and
  // the free endpoint times, which keeps its finite differences sparse.
  bool any_lagrangian = false;
  for (const auto& ph : problem.phases)
    if (ph.lagrangian) any_lagrangian = true;
  if (!any_lagrangian && problem.mayer) {
    for (int c = 0; c < L.ny[0]; ++c) nlp.objective_cols.push_back(L.state_index(0, 0, c));
    for (int c = 0; c < L.ny[P - 1]; ++c)
      nlp.objective_cols.push_back(L.state_index(P - 1, L.num_colloc[P - 1], c));
    if (L.time_var[0] >= 0) nlp.objective_cols.push_back(L.time_var[0]);
    if (L.time_var[P] >= 0) nlp.objective_cols.push_back(L.time_var[P]);
    std::sort(nlp.objective_cols.begin(), nlp.objective_cols.end());
    nlp.objective_cols.erase(std::unique(nlp.objective_cols.begin(), nlp.objective_cols.end()),
                             nlp.objective_cols.end());
  }

  return nlp;
}

Eigen::VectorXd seed_from_guess(const NlpProblem& nlp, const std::vector<InitialGuess>& guesses) {
  const VariableLayout& L = nlp.layout;
  if (static_cast<int>(guesses.size()) != L.num_phases)
    throw std::invalid_argument("seed_from_guess: one guess per phase required");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(L.num_vars);

  for (int b = 0; b <= L.num_phases; ++b) {
    if (L.time_var[b] < 0) continue;
    const double t = (b == 0) ? guesses[0].breakpoints(0)
                              : guesses[b - 1].breakpoints(guesses[b - 1].breakpoints.size() - 1);
    x(L.time_var[b]) = t;
  }

  for (int p = 0; p < L.num_phases; ++p) {
    const InitialGuess& g = guesses[p];
    const double t0 = g.breakpoints(0);
    const double tf = g.breakpoints(g.breakpoints.size() - 1);
    const int nodes = L.num_colloc[p] + 1;
    for (int node = 0; node < nodes; ++node) {
      const bool aliased_start = node == 0 && p > 0 &&
                                 L.state_node_base[p][0] == L.state_node_base[p - 1].back();
      if (aliased_start) continue;  // keep the earlier phase's terminal value
      const double t = map_tau_to_t(L.node_tau[p](node), t0, tf);
      const auto [y, u] = evaluate_guess(g, t);
      for (int c = 0; c < L.ny[p]; ++c) x(L.state_index(p, node, c)) = y(c);
      if (node < L.num_colloc[p] && L.nu[p] > 0 && u.size() == L.nu[p]) {
        for (int c = 0; c < L.nu[p]; ++c) x(L.control_index(p, node, c)) = u(c);
      }
    }
  }

  // Keep the seed inside the variable box.
  for (int i = 0; i < L.num_vars; ++i)
    x(i) = std::min(std::max(x(i), nlp.var_lo(i)), nlp.var_hi(i));
  return x;
}

Trajectory extract_trajectory(const NlpProblem& nlp, Eigen::Ref<const Eigen::VectorXd> x) {
  if (x.size() != nlp.num_vars)
    throw std::invalid_argument("extract_trajectory: decision vector length mismatch");
  const VariableLayout& L = nlp.layout;
  Trajectory traj;
  traj.phases.resize(L.num_phases);
  for (int p = 0; p < L.num_phases; ++p) {
    Trajectory::Phase& ph = traj.phases[p];
    ph.t0 = L.time_value(p, x);
    ph.tf = L.time_value(p + 1, x);
    ph.mesh = L.meshes[p];
    ph.node_tau = L.node_tau[p];
    const int nodes = L.num_colloc[p] + 1;
    ph.node_time.resize(nodes);
    for (int node = 0; node < nodes; ++node)
      ph.node_time(node) = map_tau_to_t(ph.node_tau(node), ph.t0, ph.tf);
    ph.states.resize(nodes, L.ny[p]);
    for (int node = 0; node < nodes; ++node)
      for (int c = 0; c < L.ny[p]; ++c) ph.states(node, c) = x(L.state_index(p, node, c));
    ph.controls.resize(L.num_colloc[p], L.nu[p]);
    for (int cn = 0; cn < L.num_colloc[p]; ++cn)
      for (int c = 0; c < L.nu[p]; ++c) ph.controls(cn, c) = x(L.control_index(p, cn, c));
  }
  traj.cost = nlp.objective(x);
  return traj;
}

Eigen::VectorXd pack_trajectory(const NlpProblem& nlp, const Trajectory& traj) {
  const VariableLayout& L = nlp.layout;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(L.num_vars);
  for (int p = 0; p < L.num_phases; ++p) {
    const Trajectory::Phase& ph = traj.phases[p];
    if (L.time_var[p] >= 0) x(L.time_var[p]) = ph.t0;
    if (L.time_var[p + 1] >= 0) x(L.time_var[p + 1]) = ph.tf;
    for (int node = 0; node <= L.num_colloc[p]; ++node)
      for (int c = 0; c < L.ny[p]; ++c) x(L.state_index(p, node, c)) = ph.states(node, c);
    for (int cn = 0; cn < L.num_colloc[p]; ++cn)
      for (int c = 0; c < L.nu[p]; ++c) x(L.control_index(p, cn, c)) = ph.controls(cn, c);
  }
  return x;
}

Eigen::VectorXd eval_phase_state(const Trajectory::Phase& phase, double tau) {
  const Mesh& mesh = phase.mesh;
  int k = 0;
  while (k + 1 < mesh.intervals() && tau >= mesh.boundaries(k + 1)) ++k;
  int off = 0;
  for (int j = 0; j < k; ++j) off += mesh.degrees[j];
  const int nk = mesh.degrees[k];
  const Eigen::VectorXd nodes = phase.node_tau.segment(off, nk + 1);
  const Eigen::VectorXd bary = barycentric_weights(nodes);
  const int ny = static_cast<int>(phase.states.cols());
  Eigen::VectorXd y(ny);
  for (int c = 0; c < ny; ++c) {
    y(c) = barycentric_eval(nodes, bary, phase.states.col(c).segment(off, nk + 1), tau);
  }
  return y;
}

Eigen::VectorXd eval_phase_control(const Trajectory::Phase& phase, double tau) {
  const int ncol = static_cast<int>(phase.controls.rows());
  const int nu = static_cast<int>(phase.controls.cols());
  Eigen::VectorXd u(nu);
  if (nu == 0) return u;
  if (ncol == 1) {
    u = phase.controls.row(0).transpose();
    return u;
  }
  const Eigen::VectorXd taus = phase.node_tau.head(ncol);
  if (tau <= taus(0)) return phase.controls.row(0).transpose();
  if (tau >= taus(ncol - 1)) return phase.controls.row(ncol - 1).transpose();
  int k = 0;
  while (k + 2 < ncol && tau > taus(k + 1)) ++k;
  const double a = (tau - taus(k)) / (taus(k + 1) - taus(k));
  u = ((1.0 - a) * phase.controls.row(k) + a * phase.controls.row(k + 1)).transpose();
  return u;
}

std::vector<InitialGuess> interpolate_solution(const Trajectory& traj,
                                               const std::vector<Mesh>& new_meshes) {
  if (new_meshes.size() != traj.phases.size())
    throw std::invalid_argument("interpolate_solution: mesh/phase count mismatch");
  std::vector<InitialGuess> guesses(traj.phases.size());
  for (std::size_t p = 0; p < traj.phases.size(); ++p) {
    const Trajectory::Phase& ph = traj.phases[p];
    const Mesh& mesh = new_meshes[p];
    const int ncol = mesh.total_collocation();
    const int nodes = ncol + 1;

    Eigen::VectorXd taus(nodes);
    int off = 0;
    for (int k = 0; k < mesh.intervals(); ++k) {
      const IntervalRule ir = interval_rule(mesh, k);
      for (int i = 0; i < ir.rule->n; ++i)
        taus(off + i) = ir.tau_lo + (ir.rule->nodes(i) + 1.0) * ir.half_width;
      off += ir.rule->n;
    }
    taus(ncol) = 1.0;

    InitialGuess& g = guesses[p];
    const int ny = static_cast<int>(ph.states.cols());
    const int nu = static_cast<int>(ph.controls.cols());
    g.breakpoints.resize(nodes);
    g.states.resize(nodes, ny);
    g.controls.resize(nodes, nu);
    for (int node = 0; node < nodes; ++node) {
      g.breakpoints(node) = map_tau_to_t(taus(node), ph.t0, ph.tf);
      g.states.row(node) = eval_phase_state(ph, taus(node)).transpose();
      if (nu > 0) g.controls.row(node) = eval_phase_control(ph, taus(node)).transpose();
    }
  }
  return guesses;
}

}  // namespace ccocp
