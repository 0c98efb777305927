#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "tridg/basis.hpp"
#include "tridg/mesh.hpp"
#include "tridg/problems.hpp"
#include "tridg/state.hpp"

namespace tridg {

/// Per-element operators.  With the orthonormal reference basis the local
/// mass matrix is jac * identity; the flux-quadrature operators Dxw/Dyw
/// contract pointwise flux values at the volume points against the physical
/// basis gradients and quadrature weights.
struct ElementOperators {
  double jac = 0.0;  // |J| = area / 2
  Eigen::MatrixXd M, Minv, Sx, Sy;
  Eigen::MatrixXd Dxw, Dyw;  // Np x nq
};

struct DgContext {
  const Mesh* mesh = nullptr;
  BasisSet basis;
  QuadratureRule vol;                   // residual / projection rule
  Rule1D erule;                         // edge Gauss rule
  Eigen::MatrixXd V, Vr, Vs;            // basis at volume points
  std::array<Eigen::MatrixXd, 3> E;     // basis at edge points, per local edge
  std::vector<ElementOperators> ops;
  int nthreads = 1;

  explicit DgContext(const Mesh& m, int N);
  int order() const { return basis.degree(); }
};

/// Assembles the per-element operators (exposed separately for testing; the
/// DgContext constructor calls it).
std::vector<ElementOperators> assemble_operators(const Mesh& mesh,
                                                 const BasisSet& basis,
                                                 const QuadratureRule& vol,
                                                 Eigen::MatrixXd& V,
                                                 Eigen::MatrixXd& Vr,
                                                 Eigen::MatrixXd& Vs);

/// F* = 1/2 (F_n(uL) + F_n(uR)) - alpha/2 (uR - uL).
State lax_friedrichs(const State& uL, const State& uR, const Vec2& n,
                     const ProblemSpec& prob, double alpha);

/// Semi-discrete residual L(u): dU/dt coefficients.  Returns the global
/// maximum wave speed observed (used for the Lax-Friedrichs alpha and dt);
/// cell_speed, when given, receives the per-cell maxima.
double residual(const DgContext& ctx, const ProblemSpec& prob,
                const StateField& state, double t, StateField& res,
                std::vector<double>* cell_speed = nullptr);

/// Per-cell maximum wave speed over the volume quadrature points; returns
/// the global maximum.
double max_wave_speed(const DgContext& ctx, const ProblemSpec& prob,
                      const StateField& state, std::vector<double>& cell_speed);

/// L2 projection of pointwise initial data onto the modal basis.
StateField project(const DgContext& ctx, const ProblemSpec& prob);

/// Cell average of variable v in cell k.
inline double cell_average(const StateField& s, int k, int v) {
  return s.cell(k, v)[0] / std::sqrt(2.0);
}

struct ErrorReport {
  double h = 0.0;
  double l1 = 0.0;
  double linf = 0.0;
};

/// L1/Linf error of component var against an exact solution at state.t,
/// by quadrature of exactness >= 2N+2.  L1 is normalized by domain area.
ErrorReport error_norms(const DgContext& ctx, const StateField& state,
                        const std::function<State(double, double, double)>& exact,
                        int var);

}  // namespace tridg
