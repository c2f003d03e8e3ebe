#include "ccocp/mesh_refinement.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ccocp {

namespace {

// Derivative of the barycentric interpolant at x (x not a node):
// p'(x) = sum_j w_j (p(x) - y_j)/(x - x_j)^2 / sum_j w_j/(x - x_j).
double barycentric_derivative(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary,
                              const Eigen::VectorXd& values, double x) {
  double num = 0.0, den = 0.0, px_num = 0.0;
  for (Eigen::Index k = 0; k < nodes.size(); ++k) {
    const double w = bary(k) / (x - nodes(k));
    px_num += w * values(k);
    den += w;
  }
  const double px = px_num / den;
  for (Eigen::Index k = 0; k < nodes.size(); ++k) {
    const double dx = x - nodes(k);
    num += bary(k) * (px - values(k)) / (dx * dx);
  }
  return num / den;
}

}  // namespace

MeshErrorReport estimate_error(const Trajectory& traj, const OcpProblem& problem) {
  MeshErrorReport report;
  report.phases.resize(traj.phases.size());

  for (std::size_t p = 0; p < traj.phases.size(); ++p) {
    const Trajectory::Phase& ph = traj.phases[p];
    const PhaseDefinition& def = problem.phases[p];
    const Mesh& mesh = ph.mesh;
    const int K = mesh.intervals();
    const int ny = static_cast<int>(ph.states.cols());
    auto& out = report.phases[p];
    out.interval_error.setZero(K);
    out.smoothness.setZero(K);

    const double tscale = 0.5 * (ph.tf - ph.t0);
    const double tmid = 0.5 * (ph.tf + ph.t0);

    int off = 0;
    for (int k = 0; k < K; ++k) {
      const int nk = mesh.degrees[k];
      const IntervalRule ir = interval_rule(mesh, k);
      const Eigen::VectorXd nodes = ph.node_tau.segment(off, nk + 1);
      const Eigen::VectorXd bary = barycentric_weights(nodes);

      // Per-component scale 1 + max |Y| over the interval's nodes.
      Eigen::VectorXd yscale(ny);
      for (int c = 0; c < ny; ++c)
        yscale(c) = 1.0 + ph.states.col(c).segment(off, nk + 1).cwiseAbs().maxCoeff();

      // Probe the dynamics defect at a denser LGR rule.
      const int np = std::min(nk + 1, kMaxLgrDegree);
      const LgrRule& probe = lgr_rule(np);
      double err = 0.0;
      for (int i = 0; i < np; ++i) {
        const double tau = ir.tau_lo + (probe.nodes(i) + 1.0) * ir.half_width;
        bool at_node = false;
        for (Eigen::Index q = 0; q < nodes.size(); ++q)
          if (std::abs(tau - nodes(q)) < 1e-12) at_node = true;
        if (at_node) continue;

        Eigen::VectorXd y(ny), dy(ny);
        for (int c = 0; c < ny; ++c) {
          y(c) = barycentric_eval(nodes, bary, ph.states.col(c).segment(off, nk + 1), tau);
          dy(c) = barycentric_derivative(nodes, bary, ph.states.col(c).segment(off, nk + 1), tau);
        }
        const Eigen::VectorXd u = eval_phase_control(ph, tau);
        const double t = tscale * tau + tmid;
        const Eigen::VectorXd a = def.dynamics(y, u, t);
        for (int c = 0; c < ny; ++c) {
          const double defect = dy(c) - ir.half_width * tscale * a(c);
          err = std::max(err, std::abs(defect) / yscale(c));
        }
      }
      out.interval_error(k) = err;

      // Smoothness from the Legendre expansion of the node polynomial:
      // fraction of the coefficient energy sitting in the upper half.
      Eigen::VectorXd local(nk + 1);
      for (int j = 0; j <= nk; ++j)
        local(j) = (nodes(j) - ir.tau_lo) / ir.half_width - 1.0;
      Eigen::MatrixXd vander(nk + 1, nk + 1);
      for (int i = 0; i <= nk; ++i)
        for (int j = 0; j <= nk; ++j) vander(i, j) = legendre_p(j, local(i));
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(vander);
      double worst_smooth = 0.0;
      for (int c = 0; c < ny; ++c) {
        const Eigen::VectorXd coeff = lu.solve(ph.states.col(c).segment(off, nk + 1));
        const int head_end = nk / 2;
        double head = 0.0, tail = 0.0;
        for (int j = 0; j <= nk; ++j) {
          const double e = coeff(j) * coeff(j);
          if (j <= head_end) head += e;
          else tail += e;
        }
        const double total = head + tail;
        if (total > 1e-300) worst_smooth = std::max(worst_smooth, std::sqrt(tail / total));
      }
      out.smoothness(k) = worst_smooth;

      report.max_error = std::max(report.max_error, err);
      off += nk;
    }
  }
  return report;
}

Mesh refine(const Mesh& mesh, const Eigen::VectorXd& interval_error,
            const Eigen::VectorXd& smoothness, const RefinementOptions& opts) {
  if (interval_error.size() != mesh.intervals() || smoothness.size() != mesh.intervals())
    throw std::invalid_argument("refine: report size does not match mesh");

  std::vector<double> bounds;
  std::vector<int> degrees;
  bounds.push_back(mesh.boundaries(0));
  for (int k = 0; k < mesh.intervals(); ++k) {
    const double lo = mesh.boundaries(k);
    const double hi = mesh.boundaries(k + 1);
    const int nk = mesh.degrees[k];
    if (interval_error(k) <= opts.mesh_tol) {
      bounds.push_back(hi);
      degrees.push_back(nk);
      continue;
    }
    const bool smooth = smoothness(k) < opts.smoothness_threshold;
    if (smooth && nk < opts.degree_max) {
      const int bump = std::max(1, static_cast<int>(
                                        std::ceil(std::log10(interval_error(k) / opts.mesh_tol))));
      bounds.push_back(hi);
      degrees.push_back(std::min(opts.degree_max, nk + bump));
    } else {
      // Split at the midpoint; children keep enough points that the total
      // collocation count never drops.
      const int child = std::max(opts.degree_min, (nk + 2) / 2);
      bounds.push_back(0.5 * (lo + hi));
      degrees.push_back(child);
      bounds.push_back(hi);
      degrees.push_back(child);
    }
  }

  Mesh out;
  out.boundaries = Eigen::Map<Eigen::VectorXd>(bounds.data(), static_cast<Eigen::Index>(bounds.size()));
  out.degrees = degrees;
  return out;
}

std::vector<Mesh> refine_all(const std::vector<Mesh>& meshes, const MeshErrorReport& report,
                             const RefinementOptions& opts) {
  std::vector<Mesh> out(meshes.size());
  for (std::size_t p = 0; p < meshes.size(); ++p)
    out[p] = refine(meshes[p], report.phases[p].interval_error, report.phases[p].smoothness, opts);
  return out;
}

}  // namespace ccocp
