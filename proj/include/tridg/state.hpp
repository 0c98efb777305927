#pragma once

#include <vector>

#include <Eigen/Dense>

namespace tridg {

/// Modal coefficients for every cell and conserved variable.  Layout:
/// coef[(cell * nvar + var) * Np + mode].
struct StateField {
  int N = 1;
  int Np = 3;
  int nvar = 1;
  double t = 0.0;
  std::vector<double> coef;

  StateField() = default;
  StateField(int N_, int Np_, int nvar_, int ncells)
      : N(N_), Np(Np_), nvar(nvar_), coef(static_cast<size_t>(ncells) * nvar_ * Np_, 0.0) {}

  int num_cells() const { return static_cast<int>(coef.size() / (size_t(nvar) * Np)); }

  double* cell(int k, int v) { return coef.data() + (size_t(k) * nvar + v) * Np; }
  const double* cell(int k, int v) const {
    return coef.data() + (size_t(k) * nvar + v) * Np;
  }
  Eigen::Map<Eigen::VectorXd> modes(int k, int v) {
    return {cell(k, v), Np};
  }
  Eigen::Map<const Eigen::VectorXd> modes(int k, int v) const {
    return {cell(k, v), Np};
  }

  bool all_finite() const {
    for (double c : coef)
      if (!std::isfinite(c)) return false;
    return true;
  }
};

}  // namespace tridg
