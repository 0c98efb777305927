#pragma once

#include <functional>
#include <vector>

#include "tridg/dg.hpp"

namespace tridg {

/// TVD Runge-Kutta stage tables (Shu-Osher form):
/// u^(i) = sum_l alpha_il u^(l) + beta_il dt L(u^(l)).
struct RKScheme {
  int order = 3;
  std::vector<std::vector<double>> alpha, beta;
  std::vector<double> c;  // stage abscissae for time-dependent boundaries

  static RKScheme make(int order);
  int stages() const { return static_cast<int>(alpha.size()); }
};

/// One step from t to t + dt.  limit (may be empty) is invoked on every
/// intermediate and final stage state with the stage time.  Returns the
/// global maximum wave speed observed in the first residual evaluation;
/// cell_speed, when given, receives the per-cell maxima from that evaluation.
double rk_step(const DgContext& ctx, const ProblemSpec& prob,
               const RKScheme& scheme, StateField& state, double t, double dt,
               const std::function<void(StateField&, double)>& limit = {},
               std::vector<double>* cell_speed = nullptr);

/// CFL time step: dt = cfl * min_k(inradius_k / speed_k) / (2N+1).
/// Returns +inf when every cell speed is zero (caller clamps to t_end - t).
double compute_dt(const DgContext& ctx, const std::vector<double>& cell_speed,
                  double cfl);

}  // namespace tridg
