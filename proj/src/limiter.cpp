#include "tridg/limiter.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tridg {

namespace {

// Monomials (xi^p eta^q) in the local frame of the troubled cell, ordered by
// total degree: 1, xi, eta, xi^2, xi*eta, eta^2, ...
int n_mono(int d) { return (d + 1) * (d + 2) / 2; }

std::vector<std::pair<int, int>> mono_exponents(int dmax) {
  std::vector<std::pair<int, int>> e;
  for (int d = 0; d <= dmax; ++d)
    for (int k = 0; k <= d; ++k) e.emplace_back(d - k, k);
  return e;
}

double falling(int p, int a) {
  double f = 1.0;
  for (int i = 0; i < a; ++i) f *= p - i;
  return f;
}

// d^(a1+a2)/dxi^a1 deta^a2 of xi^p eta^q, evaluated at (xi, eta).
double mono_deriv(int p, int q, int a1, int a2, double xi, double eta) {
  if (p < a1 || q < a2) return 0.0;
  return falling(p, a1) * falling(q, a2) * std::pow(xi, p - a1) *
         std::pow(eta, q - a2);
}

// Linear-weight column for level m: gamma_l ~ (1/h)^(l-1), normalized.
// Columns 2 and 3 have m entries; columns 4 and 5 have m-1 entries, because
// their telescoping identities skip one equivalent polynomial:
//   gamma_{1,4} p1 + gamma_{2,4} p2 + gamma_{3,4} p4 = q4
//   gamma_{1,5} p1 + gamma_{2,5} p2 + gamma_{3,5} p3 + gamma_{4,5} p5 = q5
std::vector<double> gamma_col(int m, double h) {
  const int t = (m <= 3) ? m : m - 1;
  std::vector<double> g(t);
  double sum = 0.0;
  for (int l = 0; l < t; ++l) sum += (g[l] = std::pow(1.0 / h, l));
  for (double& v : g) v /= sum;
  return g;
}

// Equivalent-polynomial levels entering the column-m combination; the last
// entry is the level whose fit the linear weights reproduce.
std::vector<int> column_levels(int m) {
  if (m <= 3) {
    std::vector<int> lv(m);
    for (int l = 0; l < m; ++l) lv[l] = l + 1;
    return lv;
  }
  return (m == 4) ? std::vector<int>{1, 2, 4} : std::vector<int>{1, 2, 3, 5};
}

const QuadratureRule& geom_rule() {
  static const QuadratureRule rule = volume_rule(6);
  return rule;
}

}  // namespace

// ---------------------------------------------------------------------------

TroubleFlags kxrcf_detect(const DgContext& ctx, const ProblemSpec& prob,
                          const StateField& state, double t, double ck) {
  const Mesh& mesh = *ctx.mesh;
  const int K = mesh.num_cells();
  const int Np = ctx.basis.num_modes();
  const int ne = ctx.erule.size();
  const int N = ctx.order();

  TroubleFlags out;
  out.flags.assign(K, 0);
  out.indicator.assign(K, 0.0);

  for (int k = 0; k < K; ++k) {
    State ubar = State::Zero();
    for (int v = 0; v < prob.nvar; ++v) ubar(v) = cell_average(state, k, v);
    const Vec2 vel = prob.indicator_velocity(ubar);

    std::array<double, 4> num{};
    double inflow_len = 0.0;
    const AffineMap map(mesh.cell_tri(k));

    for (int e = 0; e < 3; ++e) {
      if (dot(vel, mesh.edge_normal[k][e]) >= 0.0) continue;
      const int nb = mesh.neighbor[k][e];
      const int eN = mesh.neighbor_edge[k][e];
      const double len = mesh.edge_length[k][e];
      inflow_len += len;
      for (int q = 0; q < ne; ++q) {
        State uL = State::Zero(), uR = State::Zero();
        for (int v = 0; v < prob.nvar; ++v)
          uL(v) = ctx.E[e].row(q).head(Np).dot(state.modes(k, v));
        if (nb != kNoNeighbor) {
          for (int v = 0; v < prob.nvar; ++v)
            uR(v) = ctx.E[eN].row(ne - 1 - q).head(Np).dot(state.modes(nb, v));
        } else {
          const Vec2 xq =
              map.to_physical(edge_ref_points(e, {ctx.erule.x[q]})[0]);
          uR = prob.boundary(mesh.tag_names[mesh.edge_tag[k][e]], xq,
                             mesh.edge_normal[k][e], t, uL);
        }
        for (int v : prob.indicator_vars)
          num[v] += ctx.erule.w[q] * 0.5 * len * (uL(v) - uR(v));
      }
    }

    if (inflow_len == 0.0) continue;
    const double hc = mesh.circumradius[k];
    const double hfac = std::pow(hc, 0.5 * (N + 1));
    double rj = 0.0;
    for (int v : prob.indicator_vars) {
      double norm2 = 0.0;
      for (int q = 0; q < ctx.vol.size(); ++q) {
        const double u = ctx.V.row(q).dot(state.modes(k, v));
        norm2 += ctx.vol.w[q] * u * u;
      }
      const double nrm = std::sqrt(ctx.ops[k].jac * norm2);
      if (nrm == 0.0) continue;
      rj = std::max(rj, std::abs(num[v]) / (hfac * inflow_len * nrm));
    }
    out.indicator[k] = rj;
    if (rj > ck) {
      out.flags[k] = 1;
      ++out.count;
    }
  }
  return out;
}

std::vector<double> weno_z_weights(const std::vector<double>& beta,
                                   const std::vector<double>& gamma,
                                   double eps, double divisor) {
  const int L = static_cast<int>(beta.size());
  double tau = 0.0;
  for (int l = 0; l + 1 < L; ++l) {
    const double d = beta[L - 1] - beta[l];
    tau += d * d;
  }
  tau /= divisor;
  std::vector<double> w(L);
  double sum = 0.0;
  for (int l = 0; l < L; ++l)
    sum += (w[l] = gamma[l] * (1.0 + tau / (eps + beta[l])));
  for (double& v : w) v /= sum;
  return w;
}

// ---------------------------------------------------------------------------

struct CswenoLimiter::CellGeom {
  struct Stencil {
    bool ok = false;
    int degree = 0;
    std::vector<int> cells;  // canonical subcell indices
    Eigen::VectorXd rw;      // area-based row weights
    Eigen::MatrixXd pinv;    // ncoef x cells
  };
  struct Beta1 {
    bool ok = false;
    Eigen::Matrix2d inv;
    double inv_sqrt_area = 0.0;
  };

  int per = 3;  // canonical subcell positions per neighbor slot (3 or 7)
  int canon = 9;
  std::array<bool, 3> slot_ok{};
  std::vector<char> present;
  std::vector<int> sub_owner;
  std::vector<Eigen::RowVectorXd> avg_row;  // subcell average of owner's modes
  Eigen::VectorXd sub_area;                 // subcell areas (canonical order)
  Eigen::MatrixXd sub_mono;                 // canon x n_mono local monomial avgs
  Eigen::VectorXd mono0;
  Eigen::MatrixXd Q;     // smoothness quadratic form on monomial coefficients
  Eigen::MatrixXd monR;  // monomials at the recon points
  std::vector<Stencil> st;  // 1-based
  std::array<Beta1, 3> b1;
  int chain = 1;
  double h = 0.0, area = 0.0;
};

CswenoLimiter::CswenoLimiter(const DgContext& ctx, LimiterConfig cfg)
    : ctx_(ctx), cfg_(cfg), recon_(recon_points(ctx.order())) {
  const int Np = ctx_.basis.num_modes();
  psiR_ = ctx_.basis.tabulate(recon_.pts);
  const int nq = recon_.size();
  const Eigen::Map<const Eigen::VectorXd> w(recon_.w.data(), nq);

  // General moment recovery A X = B; with the orthonormal basis and an
  // exact rule A is the identity and the coupling vector C vanishes.
  Eigen::MatrixXd A(Np - 1, Np - 1);
  Eigen::MatrixXd W(Np - 1, nq);
  Eigen::VectorXd C(Np - 1);
  for (int i = 1; i < Np; ++i) {
    for (int j = 1; j < Np; ++j)
      A(i - 1, j - 1) = (w.array() * psiR_.col(i).array() * psiR_.col(j).array()).sum();
    W.row(i - 1) = (w.array() * psiR_.col(i).array()).transpose();
    C(i - 1) = (w.array() * psiR_.col(0).array() * psiR_.col(i).array()).sum();
  }
  const Eigen::MatrixXd Ainv = A.inverse();
  recW_ = Ainv * W;
  recC_ = Ainv * C;
  cache_.resize(ctx_.mesh->num_cells());
}

CswenoLimiter::~CswenoLimiter() = default;

const CswenoLimiter::CellGeom& CswenoLimiter::geom(int cell) const {
  if (cache_[cell]) return *cache_[cell];
  const Mesh& mesh = *ctx_.mesh;
  const int N = ctx_.order();
  const int dmax = 2 * N;
  const int nm = n_mono(dmax);
  const auto exps = mono_exponents(dmax);
  const QuadratureRule& rule = geom_rule();
  const int nq = rule.size();
  const int Np = ctx_.basis.num_modes();

  auto g = std::make_unique<CellGeom>();
  g->per = (N == 1) ? 3 : 9;
  g->canon = 3 * g->per;
  g->present.assign(g->canon, 0);
  g->sub_owner.assign(g->canon, -1);
  g->avg_row.assign(g->canon, Eigen::RowVectorXd::Zero(Np));
  g->sub_area = Eigen::VectorXd::Zero(g->canon);
  g->sub_mono = Eigen::MatrixXd::Zero(g->canon, nm);
  g->h = mesh.hsize[cell];
  g->area = mesh.area[cell];
  const Vec2 x0 = mesh.centroid[cell];
  const double h = g->h;

  auto mono_avg = [&](const Tri& tri, Eigen::VectorXd& out) {
    out.setZero(nm);
    const AffineMap m(tri);
    for (int q = 0; q < nq; ++q) {
      const Vec2 x = m.to_physical(rule.pts[q]);
      const double xi = (x.x - x0.x) / h, eta = (x.y - x0.y) / h;
      for (int j = 0; j < nm; ++j)
        out(j) += 0.5 * rule.w[q] * std::pow(xi, exps[j].first) *
                  std::pow(eta, exps[j].second);
    }
  };

  for (int slot = 0; slot < 3; ++slot) {
    const int nb = mesh.neighbor[cell][slot];
    if (nb == kNoNeighbor) continue;
    g->slot_ok[slot] = true;
    const Vec2 shift = mesh.neighbor_shift[cell][slot];
    const SubcellDecomposition dec =
        subdivide_neighbor(mesh, cell, slot, N >= 2 ? 2 : 1);

    std::vector<SubcellChild> children(dec.level1.begin(), dec.level1.end());
    for (const auto& c : dec.level2) children.push_back(c);
    for (const auto& c : dec.level2b) children.push_back(c);

    const AffineMap nbmap(mesh.cell_tri(nb));
    for (int j = 0; j < static_cast<int>(children.size()); ++j) {
      const int idx = slot * g->per + j;
      g->present[idx] = 1;
      g->sub_owner[idx] = nb;
      const AffineMap cm(children[j].v);
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(Np);
      for (int q = 0; q < nq; ++q) {
        const Vec2 x = cm.to_physical(rule.pts[q]);
        const RefPoint r = nbmap.to_reference(x - shift);
        for (int m = 0; m < Np; ++m)
          row(m) += 0.5 * rule.w[q] * ctx_.basis.value(m, r.r, r.s);
      }
      g->avg_row[idx] = row;
      g->sub_area(idx) = children[j].area;
      Eigen::VectorXd ma;
      mono_avg(children[j].v, ma);
      g->sub_mono.row(idx) = ma.transpose();
    }

    // Magnified-beta1 interpolation: p_{1,slot} in the span of
    // (x - x_l)/sqrt(|D_l|), (y - y_l)/sqrt(|D_l|), matched at the centroids
    // of the two non-adjacent level-1 subcells.
    const Vec2 xl = mesh.centroid[nb] + shift;
    const double isa = 1.0 / std::sqrt(mesh.area[nb]);
    Eigen::Matrix2d M;
    for (int r = 0; r < 2; ++r) {
      const Vec2 c = dec.level1[r + 1].centroid;
      M(r, 0) = (c.x - xl.x) * isa;
      M(r, 1) = (c.y - xl.y) * isa;
    }
    const double det = M.determinant();
    if (std::abs(det) > 1e-10) {
      g->b1[slot].ok = true;
      g->b1[slot].inv = M.inverse();
      g->b1[slot].inv_sqrt_area = isa;
    }
  }

  mono_avg(mesh.cell_tri(cell), g->mono0);

  // Smoothness quadratic form: beta = c^T Q c with
  // Q = sum_{1<=|a|<=N} |D0|^{|a|} h^{-2|a|} avg_{D0}(d^a m_j d^a m_k).
  g->Q = Eigen::MatrixXd::Zero(nm, nm);
  const AffineMap map0(mesh.cell_tri(cell));
  for (int atot = 1; atot <= N; ++atot) {
    for (int a1 = 0; a1 <= atot; ++a1) {
      const int a2 = atot - a1;
      Eigen::MatrixXd D(nq, nm);
      for (int q = 0; q < nq; ++q) {
        const Vec2 x = map0.to_physical(rule.pts[q]);
        const double xi = (x.x - x0.x) / h, eta = (x.y - x0.y) / h;
        for (int j = 0; j < nm; ++j)
          D(q, j) = mono_deriv(exps[j].first, exps[j].second, a1, a2, xi, eta);
      }
      const double scale = std::pow(g->area, atot) * std::pow(h, -2 * atot);
      Eigen::VectorXd wq(nq);
      for (int q = 0; q < nq; ++q) wq(q) = 0.5 * rule.w[q];
      g->Q += scale * D.transpose() * wq.asDiagonal() * D;
    }
  }

  // Constrained least-squares stencils.  Degrees 1..2N; the fitted
  // polynomial's average over the troubled cell is imposed exactly, so the
  // unknowns are the degree >= 1 coefficients.
  const int nst = (N == 1) ? 3 : 5;
  g->st.resize(nst + 1);
  auto build = [&](int m, int degree, const std::vector<int>& cells) {
    auto& s = g->st[m];
    s.degree = degree;
    s.cells = cells;
    const int ncoef = n_mono(degree) - 1;
    if (static_cast<int>(cells.size()) < ncoef) return;
    // Area-weighted rows: sliver subcells carry near-pointwise data with a
    // long lever arm into the fitted high-order coefficients, so an
    // unweighted fit lets them dominate and destabilizes the reconstruction.
    s.rw.resize(cells.size());
    for (size_t i = 0; i < cells.size(); ++i)
      s.rw(i) = std::sqrt(g->sub_area(cells[i]) / g->area);
    Eigen::MatrixXd A(cells.size(), ncoef);
    for (size_t i = 0; i < cells.size(); ++i)
      for (int j = 0; j < ncoef; ++j)
        A(i, j) = s.rw(i) * (g->sub_mono(cells[i], j + 1) - g->mono0(j + 1));
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(1e-10);
    if (cod.rank() < ncoef) return;
    s.pinv = cod.pseudoInverse();
    s.ok = true;
  };

  std::vector<int> adj, lvl1, t4, t5;
  for (int slot = 0; slot < 3; ++slot) {
    if (!g->slot_ok[slot]) continue;
    adj.push_back(slot * g->per);
    for (int j = 0; j < 3; ++j) lvl1.push_back(slot * g->per + j);
    for (int j = 0; j < g->per; ++j)
      if (g->present[slot * g->per + j]) {
        t4.push_back(slot * g->per + j);
        t5.push_back(slot * g->per + j);
      }
  }
  build(2, 1, adj);
  build(3, 2, (N >= 2) ? t4 : lvl1);
  if (N >= 2) {
    build(4, 3, t4);
    build(5, 4, t5);
  }
  g->chain = 1;
  for (int m = 2; m <= nst && g->st[m].ok; ++m) g->chain = m;

  // Monomials at the recon points.
  const int npts = recon_.size();
  g->monR.resize(npts, nm);
  for (int q = 0; q < npts; ++q) {
    const Vec2 x = map0.to_physical(recon_.pts[q]);
    const double xi = (x.x - x0.x) / h, eta = (x.y - x0.y) / h;
    for (int j = 0; j < nm; ++j)
      g->monR(q, j) =
          std::pow(xi, exps[j].first) * std::pow(eta, exps[j].second);
  }

  cache_[cell] = std::move(g);
  return *cache_[cell];
}

// ---------------------------------------------------------------------------

void CswenoLimiter::weno_point_values(const CellGeom& g, double u0bar,
                                      const Eigen::VectorXd& sub_avg,
                                      Eigen::VectorXd& uq,
                                      ReconWorkspace* ws) const {
  const int nm = static_cast<int>(g.mono0.size());
  // Highest fit level in the final combination: the quadratic fit, degraded
  // to whatever prefix of stencils is usable.  The cubic and quartic fits
  // q4/q5 are computed (diagnostics, workspace) but kept out of the
  // combination: with all data confined to the immediate neighbors they act
  // as near-interpolants whose extracted high derivatives feed back through
  // the cell fluxes, and the coupled scheme has an unstable mode that grows
  // per unit time independent of the step size (see the regression evolution
  // tests).  The quadratic top candidate is stable and keeps the design
  // order of the P2 scheme.
  const int M = std::min(g.chain, 3);
  const int L = ws ? g.chain : M;

  uq.setConstant(recon_.size(), u0bar);
  if (ws) {
    ws->chain = g.chain;
    ws->subcell_avg.assign(sub_avg.data(), sub_avg.data() + sub_avg.size());
  }
  if (M < 2) return;

  // Candidate fits q_1..q_L as monomial coefficient vectors.
  std::vector<Eigen::VectorXd> q(L + 1, Eigen::VectorXd::Zero(nm));
  q[1](0) = u0bar;
  for (int m = 2; m <= L; ++m) {
    const auto& s = g.st[m];
    Eigen::VectorXd rhs(s.cells.size());
    for (size_t i = 0; i < s.cells.size(); ++i)
      rhs(i) = s.rw(i) * (sub_avg(s.cells[i]) - u0bar);
    const Eigen::VectorXd c = s.pinv * rhs;
    const int ncoef = static_cast<int>(c.size());
    q[m](0) = u0bar - c.dot(g.mono0.segment(1, ncoef));
    q[m].segment(1, ncoef) = c;
  }

  // Equivalent polynomials via the gamma recursions.  Each column-m identity
  // telescopes over column_levels(m), so the final combination reproduces the
  // highest-degree fit when all weights reach their linear values.
  std::vector<Eigen::VectorXd> p(L + 1);
  p[1] = q[1];
  const auto g2 = gamma_col(2, g.h);
  const auto g3 = gamma_col(3, g.h);
  if (L >= 2) p[2] = (q[2] - g2[0] * p[1]) / g2[1];
  if (L >= 3) p[3] = (q[3] - g3[0] * p[1] - g3[1] * p[2]) / g3[2];
  if (L >= 4) {
    const auto g4 = gamma_col(4, g.h);
    p[4] = (q[4] - g4[0] * p[1] - g4[1] * p[2]) / g4[2];
  }
  if (L >= 5) {
    const auto g5 = gamma_col(5, g.h);
    p[5] = (q[5] - g5[0] * p[1] - g5[1] * p[2] - g5[2] * p[3]) / g5[3];
  }

  // Smoothness indicators; beta_1 is magnified from zero using the blended
  // per-neighbor linear interpolants.
  const std::vector<int> cand = column_levels(M);
  const int ncand = static_cast<int>(cand.size());
  std::vector<double> beta(ncand);
  std::vector<double> b11, sigmas;
  {
    std::vector<Eigen::Vector2d> grad;
    for (int slot = 0; slot < 3; ++slot) {
      if (!g.b1[slot].ok) continue;
      const int base = slot * g.per;
      Eigen::Vector2d rhs(sub_avg(base + 1) - sub_avg(base),
                          sub_avg(base + 2) - sub_avg(base));
      const Eigen::Vector2d ab = g.b1[slot].inv * rhs;
      grad.push_back(ab * g.b1[slot].inv_sqrt_area);
      b11.push_back(g.area * grad.back().squaredNorm());
    }
    const int ns = static_cast<int>(grad.size());
    if (ns > 0) {
      double diff = 0.0;
      int npairs = 0;
      for (int i = 0; i < ns; ++i)
        for (int j = i + 1; j < ns; ++j, ++npairs) {
          const double d = b11[i] - b11[j];
          diff += d * d;
        }
      if (npairs > 0) diff /= npairs;
      const double lambda = 1.0 / ns;
      double sigma_sum = 0.0;
      Eigen::Vector2d blend = Eigen::Vector2d::Zero();
      sigmas.resize(ns);
      for (int i = 0; i < ns; ++i)
        sigma_sum += (sigmas[i] =
                          lambda * (1.0 + diff * diff / (b11[i] + cfg_.eps)));
      for (int i = 0; i < ns; ++i) blend += (sigmas[i] / sigma_sum) * grad[i];
      beta[0] = g.area * blend.squaredNorm();
    }
  }
  for (int i = 1; i < ncand; ++i)
    beta[i] = p[cand[i]].dot(g.Q * p[cand[i]]);

  const auto gamma = gamma_col(M, g.h);
  const double divisor = (ncand >= 4) ? 16.0 : 4.0;
  const auto omega = weno_z_weights(beta, gamma, cfg_.eps, divisor);

  Eigen::VectorXd comb = Eigen::VectorXd::Zero(nm);
  for (int i = 0; i < ncand; ++i) comb += omega[i] * p[cand[i]];
  uq = g.monR * comb;

  if (ws) {
    ws->q.assign(q.begin() + 1, q.end());
    ws->p.assign(p.begin() + 1, p.end());
    ws->beta = beta;
    ws->beta11 = b11;
    ws->sigma = sigmas;
    ws->gamma = gamma;
    ws->omega = omega;
    ws->cand = cand;
    double tau = 0.0;
    for (int i = 0; i + 1 < ncand; ++i) {
      const double d = beta[ncand - 1] - beta[i];
      tau += d * d;
    }
    ws->tau = tau / divisor;
    ws->u_q = uq;
  }
}

Eigen::VectorXd CswenoLimiter::gather_averages(const CellGeom& g,
                                               const StateField& state,
                                               int var) const {
  Eigen::VectorXd avg =
      Eigen::VectorXd::Constant(g.canon, std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < g.canon; ++i)
    if (g.present[i]) avg(i) = g.avg_row[i].dot(state.modes(g.sub_owner[i], var));
  return avg;
}

void CswenoLimiter::reconstruct_cell(const CellGeom& g, const ProblemSpec& prob,
                                     const StateField& snap, StateField& state,
                                     int k) const {
  const int Np = ctx_.basis.num_modes();
  Eigen::VectorXd uq;

  if (prob.nvar == 1 || !cfg_.characteristic) {
    for (int v = 0; v < prob.nvar; ++v) {
      const double u0hat = snap.cell(k, v)[0];
      weno_point_values(g, u0hat / std::sqrt(2.0), gather_averages(g, snap, v),
                        uq, nullptr);
      state.modes(k, v).tail(Np - 1) = recW_ * uq - u0hat * recC_;
    }
    return;
  }

  // Characteristic limiting: decompose the stencil averages with the left
  // eigenvectors of the mean-state Jacobian, limit each field as a scalar,
  // and transform back.  One pass per coordinate direction, averaged.
  State ubar;
  Eigen::MatrixXd subcons(g.canon, 4);
  for (int v = 0; v < 4; ++v) {
    ubar(v) = cell_average(snap, k, v);
    subcons.col(v) = gather_averages(g, snap, v);
  }
  std::vector<int> dirs;
  if (cfg_.char_directions == 2)
    dirs = {0, 1};
  else
    dirs = {cfg_.char_directions};

  Eigen::MatrixXd tail = Eigen::MatrixXd::Zero(Np - 1, 4);
  Eigen::MatrixXd uqmat(recon_.size(), 4);
  for (int dir : dirs) {
    Eigen::Matrix4d L, R;
    Eigen::Vector4d speeds;
    euler_eigensystem(ubar, dir, L, R, speeds);
    const Eigen::Vector4d cbar = L * ubar;
    const Eigen::MatrixXd subchar = subcons * L.transpose();
    for (int f = 0; f < 4; ++f) {
      weno_point_values(g, cbar(f), subchar.col(f), uq, nullptr);
      uqmat.col(f) = uq;
    }
    const Eigen::MatrixXd uqcons = uqmat * R.transpose();
    for (int v = 0; v < 4; ++v)
      tail.col(v) += recW_ * uqcons.col(v) - snap.cell(k, v)[0] * recC_;
  }
  tail /= static_cast<double>(dirs.size());
  for (int v = 0; v < 4; ++v) state.modes(k, v).tail(Np - 1) = tail.col(v);
}

Eigen::VectorXd CswenoLimiter::reconstruct_scalar(const StateField& state,
                                                  int var, int cell,
                                                  ReconWorkspace* ws) const {
  const CellGeom& g = geom(cell);
  const double u0hat = state.cell(cell, var)[0];
  Eigen::VectorXd uq;
  weno_point_values(g, u0hat / std::sqrt(2.0), gather_averages(g, state, var),
                    uq, ws);
  const int Np = ctx_.basis.num_modes();
  Eigen::VectorXd out(Np);
  out(0) = u0hat;
  out.tail(Np - 1) = recW_ * uq - u0hat * recC_;
  return out;
}

int CswenoLimiter::apply(const ProblemSpec& prob, StateField& state, double t) {
  const int K = ctx_.mesh->num_cells();
  if (cfg_.limit_all) {
    flags_.flags.assign(K, 1);
    flags_.indicator.assign(K, 0.0);
    flags_.count = K;
  } else {
    flags_ = kxrcf_detect(ctx_, prob, state, t, cfg_.ck);
  }
  if (flags_.count == 0) return 0;

  std::vector<int> cells;
  cells.reserve(flags_.count);
  for (int k = 0; k < K; ++k)
    if (flags_.flags[k]) {
      geom(k);  // build the cache serially
      cells.push_back(k);
    }

  const StateField snap = state;
  const int n = static_cast<int>(cells.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(ctx_.nthreads)
#endif
  for (int i = 0; i < n; ++i)
    reconstruct_cell(*cache_[cells[i]], prob, snap, state, cells[i]);

  if (prob.nvar == 4) positivity_fallback(state);
  return n;
}

// Squashes the modal tail to the (conservative) cell mean wherever the
// polynomial produces non-physical density or pressure at a volume or edge
// quadrature point.  The cell average is untouched, so conservation is
// preserved; this only engages in near-vacuum or strong-shock cells where a
// polynomial representation is meaningless anyway.
void CswenoLimiter::positivity_fallback(StateField& state) const {
  const int K = ctx_.mesh->num_cells();
  const int Np = ctx_.basis.num_modes();
  const double floor_ratio = 1e-8;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(ctx_.nthreads)
#endif
  for (int k = 0; k < K; ++k) {
    State u;
    auto bad_at = [&](const Eigen::MatrixXd& tab, int q) {
      for (int v = 0; v < 4; ++v) u(v) = tab.row(q).dot(state.modes(k, v));
      const double ke = 0.5 * (u(1) * u(1) + u(2) * u(2)) / u(0);
      return u(0) <= floor_ratio || u(3) - ke <= floor_ratio;
    };
    bool bad = false;
    for (int q = 0; q < ctx_.vol.size() && !bad; ++q) bad = bad_at(ctx_.V, q);
    for (int e = 0; e < 3 && !bad; ++e)
      for (int q = 0; q < ctx_.erule.size() && !bad; ++q)
        bad = bad_at(ctx_.E[e], q);
    if (bad)
      for (int v = 0; v < 4; ++v) state.modes(k, v).tail(Np - 1).setZero();
  }
}

}  // namespace tridg
