#include "tridg/rk.hpp"

#include <limits>
#include <stdexcept>

namespace tridg {

RKScheme RKScheme::make(int order) {
  RKScheme s;
  s.order = order;
  if (order == 2) {
    s.alpha = {{1.0}, {0.5, 0.5}};
    s.beta = {{1.0}, {0.0, 0.5}};
    s.c = {0.0, 1.0};
  } else if (order == 3) {
    s.alpha = {{1.0}, {0.75, 0.25}, {1.0 / 3.0, 0.0, 2.0 / 3.0}};
    s.beta = {{1.0}, {0.0, 0.25}, {0.0, 0.0, 2.0 / 3.0}};
    s.c = {0.0, 1.0, 0.5};
  } else {
    throw std::runtime_error("unsupported TVD-RK order " + std::to_string(order));
  }
  return s;
}

double rk_step(const DgContext& ctx, const ProblemSpec& prob,
               const RKScheme& scheme, StateField& state, double t, double dt,
               const std::function<void(StateField&, double)>& limit,
               std::vector<double>* cell_speed) {
  const int ns = scheme.stages();
  std::vector<StateField> u(ns + 1);
  std::vector<StateField> res(ns);
  u[0] = state;

  double first_speed = 0.0;
  for (int i = 1; i <= ns; ++i) {
    StateField next = u[0];
    for (double& v : next.coef) v = 0.0;
    for (int l = 0; l < i; ++l) {
      const double a = scheme.alpha[i - 1][l];
      const double b = scheme.beta[i - 1][l];
      if (b != 0.0 && res[l].coef.empty()) {
        const double sp = residual(ctx, prob, u[l], t + scheme.c[l] * dt, res[l],
                                   l == 0 ? cell_speed : nullptr);
        if (l == 0) first_speed = sp;
      }
      if (a != 0.0)
        for (size_t m = 0; m < next.coef.size(); ++m)
          next.coef[m] += a * u[l].coef[m];
      if (b != 0.0)
        for (size_t m = 0; m < next.coef.size(); ++m)
          next.coef[m] += b * dt * res[l].coef[m];
    }
    const double stage_t = (i == ns) ? t + dt : t + scheme.c[i] * dt;
    next.t = stage_t;
    if (limit) limit(next, stage_t);
    if (!next.all_finite()) {
      int bad_cell = -1;
      const int Np = next.Np, nvar = next.nvar;
      for (size_t m = 0; m < next.coef.size() && bad_cell < 0; ++m)
        if (!std::isfinite(next.coef[m]))
          bad_cell = static_cast<int>(m / (size_t(nvar) * Np));
      throw std::runtime_error("NaN after RK stage " + std::to_string(i) +
                               " at t=" + std::to_string(stage_t) + ", cell " +
                               std::to_string(bad_cell));
    }
    u[i] = std::move(next);
  }
  state = std::move(u[ns]);
  state.t = t + dt;
  return first_speed;
}

double compute_dt(const DgContext& ctx, const std::vector<double>& cell_speed,
                  double cfl) {
  const int N = ctx.order();
  double dt = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < cell_speed.size(); ++k)
    if (cell_speed[k] > 0.0)
      dt = std::min(dt, ctx.mesh->inradius[k] / cell_speed[k]);
  return cfl * dt / (2.0 * N + 1.0);
}

}  // namespace tridg
