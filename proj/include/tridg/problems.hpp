#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tridg/geom.hpp"

namespace tridg {

// Conserved state; scalar problems use component 0, Euler uses all four
// (rho, rho*u, rho*v, E).
using State = Eigen::Vector4d;

constexpr double kGamma = 1.4;

enum class BcKind { Periodic, Dirichlet, Outflow, Reflective };

struct ProblemSpec {
  std::string name;
  int nvar = 1;

  std::function<void(const State&, State&, State&)> flux;    // f and g
  std::function<double(const State&)> max_speed;             // spectral bound
  std::function<Vec2(const State&)> indicator_velocity;      // KXRCF direction
  std::vector<int> indicator_vars;                           // components monitored

  std::function<State(double, double)> initial;
  std::function<State(double, double, double)> exact;        // may be empty

  // Ghost state for a boundary edge with the given tag name; n is the
  // outward unit normal of the interior cell.
  std::function<State(const std::string& tag, const Vec2& x, const Vec2& n,
                      double t, const State& u_in)>
      boundary;

  bool periodic_x = false;
  bool periodic_y = false;
  std::array<double, 4> box = {0, 0, 1, 1};  // xmin, ymin, xmax, ymax

  bool has_exact() const { return static_cast<bool>(exact); }
};

/// Factory for the built-in problems: burgers_smooth, euler_entropy_wave,
/// isentropic_vortex, shock_entropy, double_mach, forward_step,
/// riemann2d_cfg3, riemann2d_cfg12.
ProblemSpec make_problem(const std::string& name);
std::vector<std::string> problem_names();

// --- Euler utilities -------------------------------------------------------

inline double euler_pressure(const State& u) {
  return (kGamma - 1.0) * (u(3) - 0.5 * (u(1) * u(1) + u(2) * u(2)) / u(0));
}

State euler_primitive_to_conserved(double rho, double u, double v, double p);
void euler_flux(const State& u, State& f, State& g);
double euler_max_speed(const State& u);

/// Eigendecomposition of the flux Jacobian at a mean state in direction 0
/// (x) or 1 (y): A = R diag(speeds) L with L R = I.
void euler_eigensystem(const State& mean, int direction, Eigen::Matrix4d& L,
                       Eigen::Matrix4d& R, Eigen::Vector4d& speeds);

// --- Burgers utilities -----------------------------------------------------

/// Exact smooth solution of u_t + (u^2/2)_x + (u^2/2)_y = 0 with
/// u0 = 0.5 + sin(pi*(x+y)/2), via Newton on the characteristic relation of
/// the 1D reduction along xi = x + y.  Valid before breaking.
double burgers_exact(double x, double y, double t);

}  // namespace tridg
