#include "tridg/dg.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tridg {

std::vector<ElementOperators> assemble_operators(const Mesh& mesh,
                                                 const BasisSet& basis,
                                                 const QuadratureRule& vol,
                                                 Eigen::MatrixXd& V,
                                                 Eigen::MatrixXd& Vr,
                                                 Eigen::MatrixXd& Vs) {
  V = basis.tabulate(vol.pts);
  basis.tabulate_grad(vol.pts, Vr, Vs);
  const int nq = vol.size();
  const Eigen::Map<const Eigen::VectorXd> w(vol.w.data(), nq);

  std::vector<ElementOperators> ops(mesh.num_cells());
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const AffineMap map(mesh.cell_tri(k));
    if (!(map.detJ > 0.0))
      throw std::runtime_error("degenerate element in operator assembly, cell " +
                               std::to_string(k));
    ElementOperators& op = ops[k];
    op.jac = map.detJ;
    const Eigen::MatrixXd Gx = map.rx * Vr + map.sx * Vs;  // d(psi)/dx at points
    const Eigen::MatrixXd Gy = map.ry * Vr + map.sy * Vs;
    op.M = op.jac * V.transpose() * w.asDiagonal() * V;
    op.Minv = op.M.inverse();
    op.Sx = op.jac * V.transpose() * w.asDiagonal() * Gx;
    op.Sy = op.jac * V.transpose() * w.asDiagonal() * Gy;
    op.Dxw = Gx.transpose() * w.asDiagonal();
    op.Dyw = Gy.transpose() * w.asDiagonal();
  }
  return ops;
}

DgContext::DgContext(const Mesh& m, int N)
    : mesh(&m),
      basis(N),
      vol(volume_rule(2 * N + 2)),
      erule(edge_rule(2 * N + 1)) {
  ops = assemble_operators(m, basis, vol, V, Vr, Vs);
  for (int e = 0; e < 3; ++e) E[e] = basis.tabulate(edge_ref_points(e, erule.x));
}

State lax_friedrichs(const State& uL, const State& uR, const Vec2& n,
                     const ProblemSpec& prob, double alpha) {
  if (!uL.allFinite() || !uR.allFinite())
    throw std::runtime_error("non-finite state in numerical flux");
  State fL, gL, fR, gR;
  prob.flux(uL, fL, gL);
  prob.flux(uR, fR, gR);
  return 0.5 * ((fL + fR) * n.x + (gL + gR) * n.y) - 0.5 * alpha * (uR - uL);
}

double residual(const DgContext& ctx, const ProblemSpec& prob,
                const StateField& state, double t, StateField& res,
                std::vector<double>* cell_speed) {
  const Mesh& mesh = *ctx.mesh;
  const int K = mesh.num_cells();
  const int Np = ctx.basis.num_modes();
  const int nvar = prob.nvar;
  const int nq = ctx.vol.size();
  const int ne = ctx.erule.size();

  if (res.coef.size() != state.coef.size()) res = state;

  // Global Lax-Friedrichs alpha: maximum wave speed over all volume points.
  double alpha = 0.0;
  if (cell_speed) cell_speed->assign(K, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(ctx.nthreads) reduction(max : alpha)
#endif
  for (int k = 0; k < K; ++k) {
    State u;
    double smax = 0.0;
    for (int q = 0; q < nq; ++q) {
      u.setZero();
      for (int v = 0; v < nvar; ++v)
        u(v) = ctx.V.row(q).dot(state.modes(k, v));
      smax = std::max(smax, prob.max_speed(u));
    }
    if (cell_speed) (*cell_speed)[k] = smax;
    alpha = std::max(alpha, smax);
  }

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(ctx.nthreads)
#endif
  for (int k = 0; k < K; ++k) {
    const ElementOperators& op = ctx.ops[k];
    Eigen::Matrix<double, Eigen::Dynamic, 4> fx(nq, 4), fy(nq, 4);
    State u, f, g;

    for (int q = 0; q < nq; ++q) {
      u.setZero();
      for (int v = 0; v < nvar; ++v)
        u(v) = ctx.V.row(q).dot(state.modes(k, v));
      prob.flux(u, f, g);
      fx.row(q) = f.transpose();
      fy.row(q) = g.transpose();
    }
    Eigen::Matrix<double, Eigen::Dynamic, 4> acc =
        op.Dxw * fx.leftCols(4) + op.Dyw * fy.leftCols(4);  // Np x 4

    for (int e = 0; e < 3; ++e) {
      const int nb = mesh.neighbor[k][e];
      const int eN = mesh.neighbor_edge[k][e];
      const Vec2 n = mesh.edge_normal[k][e];
      const double scale = mesh.edge_length[k][e] / (2.0 * op.jac);
      const AffineMap map(mesh.cell_tri(k));

      for (int q = 0; q < ne; ++q) {
        State uL = State::Zero(), uR = State::Zero();
        for (int v = 0; v < nvar; ++v)
          uL(v) = ctx.E[e].row(q).dot(state.modes(k, v));
        if (nb != kNoNeighbor) {
          // Conforming CCW meshes traverse the shared edge in opposite
          // directions, so the neighbor sees our q-th point as its
          // (ne-1-q)-th.
          for (int v = 0; v < nvar; ++v)
            uR(v) = ctx.E[eN].row(ne - 1 - q).dot(state.modes(nb, v));
        } else {
          const int tag = mesh.edge_tag[k][e];
          if (tag < 0 || !prob.boundary)
            throw std::runtime_error("unresolved boundary tag on cell " +
                                     std::to_string(k));
          const Vec2 xq = map.to_physical(edge_ref_points(e, {ctx.erule.x[q]})[0]);
          uR = prob.boundary(mesh.tag_names[tag], xq, n, t, uL);
        }
        const State fs = lax_friedrichs(uL, uR, n, prob, alpha);
        const double wq = ctx.erule.w[q] * scale;
        for (int v = 0; v < nvar; ++v)
          for (int i = 0; i < Np; ++i) acc(i, v) -= wq * ctx.E[e](q, i) * fs(v);
      }
    }
    for (int v = 0; v < nvar; ++v)
      res.modes(k, v) = acc.col(v).head(Np);
  }
  res.t = state.t;
  return alpha;
}

double max_wave_speed(const DgContext& ctx, const ProblemSpec& prob,
                      const StateField& state, std::vector<double>& cell_speed) {
  const int K = ctx.mesh->num_cells();
  const int nq = ctx.vol.size();
  cell_speed.assign(K, 0.0);
  double alpha = 0.0;
  for (int k = 0; k < K; ++k) {
    State u;
    double smax = 0.0;
    for (int q = 0; q < nq; ++q) {
      u.setZero();
      for (int v = 0; v < prob.nvar; ++v)
        u(v) = ctx.V.row(q).dot(state.modes(k, v));
      smax = std::max(smax, prob.max_speed(u));
    }
    cell_speed[k] = smax;
    alpha = std::max(alpha, smax);
  }
  return alpha;
}

StateField project(const DgContext& ctx, const ProblemSpec& prob) {
  const Mesh& mesh = *ctx.mesh;
  StateField s(ctx.order(), ctx.basis.num_modes(), prob.nvar, mesh.num_cells());
  const int nq = ctx.vol.size();
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const AffineMap map(mesh.cell_tri(k));
    for (int q = 0; q < nq; ++q) {
      const Vec2 x = map.to_physical(ctx.vol.pts[q]);
      const State u = prob.initial(x.x, x.y);
      for (int v = 0; v < prob.nvar; ++v)
        for (int m = 0; m < ctx.basis.num_modes(); ++m)
          s.cell(k, v)[m] += ctx.vol.w[q] * u(v) * ctx.V(q, m);
    }
  }
  return s;
}

ErrorReport error_norms(const DgContext& ctx, const StateField& state,
                        const std::function<State(double, double, double)>& exact,
                        int var) {
  const Mesh& mesh = *ctx.mesh;
  ErrorReport rep;
  double total_area = 0.0, hsum = 0.0;
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const AffineMap map(mesh.cell_tri(k));
    for (int q = 0; q < ctx.vol.size(); ++q) {
      const Vec2 x = map.to_physical(ctx.vol.pts[q]);
      const double uh = ctx.V.row(q).dot(state.modes(k, var));
      const double ue = exact(x.x, x.y, state.t)(var);
      const double err = std::abs(uh - ue);
      rep.l1 += map.detJ * ctx.vol.w[q] * err;
      rep.linf = std::max(rep.linf, err);
    }
    total_area += mesh.area[k];
    hsum += mesh.hsize[k];
  }
  rep.l1 /= total_area;
  rep.h = hsum / mesh.num_cells();
  return rep;
}

}  // namespace tridg
