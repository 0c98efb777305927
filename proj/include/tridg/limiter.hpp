#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "tridg/dg.hpp"

namespace tridg {

struct LimiterConfig {
  double ck = 1.0;         // KXRCF threshold
  double eps = 1e-10;      // WENO-Z regularization
  bool limit_all = false;  // skip detection, limit every cell
  bool characteristic = true;  // characteristic-field limiting for systems
  int char_directions = 2;     // 0: x-Jacobian, 1: y-Jacobian, 2: average both
};

struct TroubleFlags {
  std::vector<char> flags;
  std::vector<double> indicator;  // max R_j over the monitored variables
  int count = 0;
};

/// KXRCF troubled-cell detection with the cell-mean indicator velocity; a
/// cell is flagged when R_j > ck for any monitored variable.
TroubleFlags kxrcf_detect(const DgContext& ctx, const ProblemSpec& prob,
                          const StateField& state, double t, double ck = 1.0);

/// WENO-Z nonlinear weights from smoothness indicators and linear weights:
/// tau = sum_{l<t} |beta_t - beta_l|^2 / divisor,
/// w_l ~ gamma_l (1 + tau / (eps + beta_l)), normalized to sum 1.
std::vector<double> weno_z_weights(const std::vector<double>& beta,
                                   const std::vector<double>& gamma,
                                   double eps, double divisor);

/// Inspection record of one scalar reconstruction, for tests and diagnostics.
/// Polynomials are stored as monomial coefficients in the local frame
/// ((x - x0)/h, (y - y0)/h) of the troubled cell, constant term first.
struct ReconWorkspace {
  std::vector<double> subcell_avg;  // canonical subcell order (NaN if absent)
  std::vector<Eigen::VectorXd> q;   // q_1..q_L
  std::vector<Eigen::VectorXd> p;   // p_1..p_L
  std::vector<double> beta;         // beta_1..beta_L
  std::vector<double> beta11;       // magnified-beta1 per-neighbor pieces
  std::vector<double> sigma;
  std::vector<double> gamma;        // final linear-weight column
  std::vector<double> omega;
  std::vector<int> cand;            // fit levels entering the combination
  double tau = 0.0;
  int chain = 1;                    // number of usable stencils (prefix)
  Eigen::VectorXd u_q;              // reconstructed values at the recon points
};

/// Compact-subcell WENO limiter.  Geometry-dependent data (subcell
/// decompositions, least-squares pseudo-inverses, smoothness quadratic
/// forms) is cached per cell on first use.
class CswenoLimiter {
 public:
  CswenoLimiter(const DgContext& ctx, LimiterConfig cfg = {});
  ~CswenoLimiter();

  /// Detects (unless limit_all) and reconstructs troubled cells in place.
  /// Returns the number of limited cells.
  int apply(const ProblemSpec& prob, StateField& state, double t);

  /// Scalar reconstruction of one cell: returns the Np modal coefficients
  /// (coefficient 0 passed through unchanged).
  Eigen::VectorXd reconstruct_scalar(const StateField& state, int var, int cell,
                                     ReconWorkspace* ws = nullptr) const;

  const TroubleFlags& last_flags() const { return flags_; }
  const LimiterConfig& config() const { return cfg_; }

 private:
  struct CellGeom;
  const CellGeom& geom(int cell) const;
  void weno_point_values(const CellGeom& g, double u0bar,
                         const Eigen::VectorXd& sub_avg, Eigen::VectorXd& uq,
                         ReconWorkspace* ws) const;
  Eigen::VectorXd gather_averages(const CellGeom& g, const StateField& state,
                                  int var) const;
  void reconstruct_cell(const CellGeom& g, const ProblemSpec& prob,
                        const StateField& snap, StateField& state, int k) const;
  void positivity_fallback(StateField& state) const;

  const DgContext& ctx_;
  LimiterConfig cfg_;
  TroubleFlags flags_;

  // Reference-level moment recovery: u_hat_tail = recW * u_q - u_hat0 * recC.
  QuadratureRule recon_;
  Eigen::MatrixXd psiR_;  // basis at recon points
  Eigen::MatrixXd recW_;
  Eigen::VectorXd recC_;

  mutable std::vector<std::unique_ptr<CellGeom>> cache_;
};

}  // namespace tridg
