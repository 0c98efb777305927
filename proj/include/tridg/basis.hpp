#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tridg/geom.hpp"

namespace tridg {

/// Number of modes of the degree-N modal basis on a triangle.
inline int mode_count(int N) { return (N + 1) * (N + 2) / 2; }

/// Orthonormal Jacobi polynomial P-tilde_n^(alpha,beta)(x) on [-1,1] with
/// weight (1-x)^alpha (1+x)^beta, normalized to unit weighted L2 norm.
double jacobi_eval(int n, double alpha, double beta, double x);
double jacobi_deriv(int n, double alpha, double beta, double x);

struct RefPoint {
  double r, s;  // reference triangle {(r,s) >= -1, r+s <= 0}
};

struct QuadratureRule {
  std::vector<RefPoint> pts;
  std::vector<double> w;  // sums to the reference area 2
  int exactness = 0;
  int size() const { return static_cast<int>(pts.size()); }
};

struct Rule1D {
  std::vector<double> x, w;  // Gauss-Legendre on [-1,1]
  int size() const { return static_cast<int>(x.size()); }
};

/// Interior rule on the reference triangle exact for all polynomials of
/// total degree <= exactness (collapsed-coordinate Gauss construction).
QuadratureRule volume_rule(int exactness);

/// Gauss-Legendre rule on [-1,1] exact to the given degree.
Rule1D edge_rule(int exactness);

/// The N_p-point symmetric interior rule the limiter reconstructs at
/// (exactness 2 for N=1, 4 for N=2, 3 for N=3).
QuadratureRule recon_points(int N);

/// Closed-form integral of r^p s^q over the reference triangle.
double ref_monomial_integral(int p, int q);

/// Orthonormal modal (Dubiner) basis of degree N on the reference triangle.
class BasisSet {
 public:
  explicit BasisSet(int N);

  int degree() const { return N_; }
  int num_modes() const { return Np_; }
  std::pair<int, int> mode_ij(int m) const { return ij_[m]; }

  /// Value and (r,s)-gradient of mode m.
  void eval(int m, double r, double s, double& val, double& dr, double& ds) const;
  double value(int m, double r, double s) const;

  /// Tabulated values (rows: points, cols: modes).
  Eigen::MatrixXd tabulate(const std::vector<RefPoint>& pts) const;
  void tabulate_grad(const std::vector<RefPoint>& pts, Eigen::MatrixXd& Vr,
                     Eigen::MatrixXd& Vs) const;

 private:
  int N_;
  int Np_;
  std::vector<std::pair<int, int>> ij_;
};

/// Points along local edge e (0..2) of the reference triangle at the 1D
/// Gauss parameters t in [-1,1], traversed with the CCW orientation.
std::vector<RefPoint> edge_ref_points(int edge, const std::vector<double>& t);

/// Affine map data for a physical triangle.
struct AffineMap {
  Vec2 v0;
  double xr, xs, yr, ys;  // d(x,y)/d(r,s)
  double rx, ry, sx, sy;  // inverse
  double detJ;            // area / 2

  explicit AffineMap(const Tri& t);
  Vec2 to_physical(const RefPoint& p) const;
  RefPoint to_reference(const Vec2& x) const;
};

}  // namespace tridg
