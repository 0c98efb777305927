#include "tridg/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace tridg {

double jacobi_eval(int n, double a, double b, double x) {
  const double gamma0 = std::pow(2.0, a + b + 1.0) / (a + b + 1.0) *
                        std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                        std::tgamma(a + b + 1.0);
  double pm1 = 1.0 / std::sqrt(gamma0);
  if (n == 0) return pm1;
  const double gamma1 = (a + 1.0) * (b + 1.0) / (a + b + 3.0) * gamma0;
  double p = ((a + b + 2.0) * x / 2.0 + (a - b) / 2.0) / std::sqrt(gamma1);
  if (n == 1) return p;
  double aold = 2.0 / (2.0 + a + b) * std::sqrt((a + 1.0) * (b + 1.0) / (a + b + 3.0));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + a + b;
    const double anew = 2.0 / (h1 + 2.0) *
                        std::sqrt((i + 1.0) * (i + 1.0 + a + b) * (i + 1.0 + a) *
                                  (i + 1.0 + b) / ((h1 + 1.0) * (h1 + 3.0)));
    const double bnew = -(a * a - b * b) / (h1 * (h1 + 2.0));
    const double pnew = (-aold * pm1 + (x - bnew) * p) / anew;
    pm1 = p;
    p = pnew;
    aold = anew;
  }
  return p;
}

double jacobi_deriv(int n, double a, double b, double x) {
  if (n == 0) return 0.0;
  return std::sqrt(n * (n + a + b + 1.0)) * jacobi_eval(n - 1, a + 1.0, b + 1.0, x);
}

// ---------------------------------------------------------------------------
// Gauss rules via Golub-Welsch on the Jacobi matrix.

namespace {

void gauss_jacobi(int n, double a, double b, std::vector<double>& x,
                  std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double dk;
    if (k == 0 && a + b == 0.0)
      dk = (b - a) / (a + b + 2.0);
    else
      dk = (b * b - a * a) / ((2.0 * k + a + b) * (2.0 * k + a + b + 2.0));
    J(k, k) = dk;
    if (k >= 1) {
      const double s = 2.0 * k + a + b;
      const double bk = 4.0 * k * (k + a) * (k + b) * (k + a + b) /
                        (s * s * (s + 1.0) * (s - 1.0));
      J(k, k - 1) = J(k - 1, k) = std::sqrt(bk);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) *
                     std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    w[i] = mu0 * v * v;
  }
}

}  // namespace

Rule1D edge_rule(int exactness) {
  Rule1D r;
  const int n = exactness / 2 + 1;
  gauss_jacobi(n, 0.0, 0.0, r.x, r.w);
  return r;
}

QuadratureRule volume_rule(int exactness) {
  const int n = exactness / 2 + 1;
  std::vector<double> xa, wa, xb, wb;
  gauss_jacobi(n, 0.0, 0.0, xa, wa);       // direction a, Legendre
  gauss_jacobi(n, 1.0, 0.0, xb, wb);       // direction b, weight (1-b)
  QuadratureRule q;
  q.exactness = exactness;
  q.pts.reserve(n * n);
  q.w.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = xa[i], b = xb[j];
      q.pts.push_back({(1.0 + a) * (1.0 - b) / 2.0 - 1.0, b});
      q.w.push_back(wa[i] * wb[j] / 2.0);
    }
  return q;
}

double ref_monomial_integral(int p, int q) {
  // Substituting u=(1+r)/2, v=(1+s)/2 maps to the unit triangle with
  // Jacobian 4; expand (2u-1)^p (2v-1)^q and use int u^a v^b = a!b!/(a+b+2)!.
  auto binom = [](int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
  };
  auto fact = [](int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
  };
  double sum = 0.0;
  for (int a = 0; a <= p; ++a)
    for (int b = 0; b <= q; ++b) {
      const double c = binom(p, a) * std::pow(-1.0, p - a) * std::pow(2.0, a) *
                       binom(q, b) * std::pow(-1.0, q - b) * std::pow(2.0, b);
      sum += c * fact(a) * fact(b) / fact(a + b + 2);
    }
  return 4.0 * sum;
}

namespace {

RefPoint bary_to_ref(double l1, double l2, double l3) {
  // vertices (-1,-1), (1,-1), (-1,1)
  return {-l1 + l2 - l3, -l1 - l2 + l3};
}

}  // namespace

QuadratureRule recon_points(int N) {
  QuadratureRule q;
  if (N == 1) {
    q.exactness = 2;
    const double a = 1.0 / 6.0;
    const std::array<std::array<double, 3>, 3> orb = {
        {{1 - 2 * a, a, a}, {a, 1 - 2 * a, a}, {a, a, 1 - 2 * a}}};
    for (const auto& l : orb) {
      q.pts.push_back(bary_to_ref(l[0], l[1], l[2]));
      q.w.push_back(2.0 / 3.0);
    }
  } else if (N == 2) {
    q.exactness = 4;
    const double a1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.091576213509771, w2 = 0.109951743655322;
    for (const auto& [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
      const std::array<std::array<double, 3>, 3> orb = {
          {{1 - 2 * a, a, a}, {a, 1 - 2 * a, a}, {a, a, 1 - 2 * a}}};
      for (const auto& l : orb) {
        q.pts.push_back(bary_to_ref(l[0], l[1], l[2]));
        q.w.push_back(2.0 * w);
      }
    }
  } else if (N == 3) {
    // Centroid plus three symmetric 3-orbits; orbit weights solved so all
    // symmetric moments through degree 3 are exact.
    q.exactness = 3;
    const std::array<double, 3> aa = {0.1, 0.3, 0.45};
    Eigen::Matrix4d A;
    Eigen::Vector4d rhs;
    auto sym2 = [](double l1, double l2, double l3) { return l1 * l1 + l2 * l2 + l3 * l3; };
    auto sym3 = [](double l1, double l2, double l3) {
      return l1 * l1 * l1 + l2 * l2 * l2 + l3 * l3 * l3;
    };
    auto prod = [](double l1, double l2, double l3) { return l1 * l2 * l3; };
    const double c = 1.0 / 3.0;
    A(0, 0) = 1.0;
    A(1, 0) = sym2(c, c, c);
    A(2, 0) = sym3(c, c, c);
    A(3, 0) = prod(c, c, c);
    for (int o = 0; o < 3; ++o) {
      const double a = aa[o], b = 1 - 2 * a;
      A(0, o + 1) = 3.0;
      A(1, o + 1) = 3.0 * sym2(b, a, a);
      A(2, o + 1) = 3.0 * sym3(b, a, a);
      A(3, o + 1) = 3.0 * prod(b, a, a);
    }
    rhs << 1.0, 0.5, 0.3, 1.0 / 60.0;  // area-mean moments on the simplex
    const Eigen::Vector4d w = A.fullPivLu().solve(rhs);
    q.pts.push_back(bary_to_ref(c, c, c));
    q.w.push_back(2.0 * w(0));
    for (int o = 0; o < 3; ++o) {
      const double a = aa[o], b = 1 - 2 * a;
      const std::array<std::array<double, 3>, 3> orb = {
          {{b, a, a}, {a, b, a}, {a, a, b}}};
      for (const auto& l : orb) {
        q.pts.push_back(bary_to_ref(l[0], l[1], l[2]));
        q.w.push_back(2.0 * w(o + 1));
      }
    }
  } else {
    throw std::runtime_error("recon_points: unsupported degree " + std::to_string(N));
  }
  return q;
}

// ---------------------------------------------------------------------------

BasisSet::BasisSet(int N) : N_(N), Np_(mode_count(N)) {
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N - i; ++j) ij_.emplace_back(i, j);
}

void BasisSet::eval(int m, double r, double s, double& val, double& dr,
                    double& ds) const {
  const auto [i, j] = ij_[m];
  // Collapsed coordinates; the (1-b)^i factor cancels the 1/(1-s) blowup, so
  // evaluation at the top vertex goes through the clamped limit.
  double b = s;
  if (1.0 - b < 1e-12) b = 1.0 - 1e-12;
  const double a = 2.0 * (1.0 + r) / (1.0 - b) - 1.0;

  const double fa = jacobi_eval(i, 0.0, 0.0, a);
  const double dfa = jacobi_deriv(i, 0.0, 0.0, a);
  const double gb = jacobi_eval(j, 2.0 * i + 1.0, 0.0, b);
  const double dgb = jacobi_deriv(j, 2.0 * i + 1.0, 0.0, b);
  const double sq2 = std::sqrt(2.0);

  const double pow_i = (i > 0) ? std::pow(1.0 - b, i) : 1.0;
  const double pow_im1 = (i > 0) ? std::pow(1.0 - b, i - 1) : 0.0;

  val = sq2 * fa * gb * pow_i;
  dr = (i > 0) ? 2.0 * sq2 * dfa * gb * pow_im1
               : 2.0 * sq2 * dfa * gb / (1.0 - b);
  ds = sq2 * (dfa * gb * (1.0 + a) * ((i > 0) ? pow_im1 : 1.0 / (1.0 - b)) +
              fa * (dgb * pow_i - i * gb * pow_im1));
}

double BasisSet::value(int m, double r, double s) const {
  double v, dr, ds;
  eval(m, r, s, v, dr, ds);
  return v;
}

Eigen::MatrixXd BasisSet::tabulate(const std::vector<RefPoint>& pts) const {
  Eigen::MatrixXd V(pts.size(), Np_);
  for (size_t p = 0; p < pts.size(); ++p)
    for (int m = 0; m < Np_; ++m) V(p, m) = value(m, pts[p].r, pts[p].s);
  return V;
}

void BasisSet::tabulate_grad(const std::vector<RefPoint>& pts,
                             Eigen::MatrixXd& Vr, Eigen::MatrixXd& Vs) const {
  Vr.resize(pts.size(), Np_);
  Vs.resize(pts.size(), Np_);
  for (size_t p = 0; p < pts.size(); ++p)
    for (int m = 0; m < Np_; ++m) {
      double v, dr, ds;
      eval(m, pts[p].r, pts[p].s, v, dr, ds);
      Vr(p, m) = dr;
      Vs(p, m) = ds;
    }
}

std::vector<RefPoint> edge_ref_points(int edge, const std::vector<double>& t) {
  std::vector<RefPoint> pts;
  pts.reserve(t.size());
  for (double u : t) {
    switch (edge) {
      case 0: pts.push_back({u, -1.0}); break;
      case 1: pts.push_back({-u, u}); break;
      case 2: pts.push_back({-1.0, -u}); break;
      default: throw std::runtime_error("edge index out of range");
    }
  }
  return pts;
}

AffineMap::AffineMap(const Tri& t) {
  v0 = t[0];
  xr = (t[1].x - t[0].x) / 2.0;
  xs = (t[2].x - t[0].x) / 2.0;
  yr = (t[1].y - t[0].y) / 2.0;
  ys = (t[2].y - t[0].y) / 2.0;
  detJ = xr * ys - xs * yr;
  rx = ys / detJ;
  ry = -xs / detJ;
  sx = -yr / detJ;
  sy = xr / detJ;
}

Vec2 AffineMap::to_physical(const RefPoint& p) const {
  return {v0.x + xr * (p.r + 1.0) + xs * (p.s + 1.0),
          v0.y + yr * (p.r + 1.0) + ys * (p.s + 1.0)};
}

RefPoint AffineMap::to_reference(const Vec2& x) const {
  const double dx = x.x - v0.x, dy = x.y - v0.y;
  return {rx * dx + ry * dy - 1.0, sx * dx + sy * dy - 1.0};
}

}  // namespace tridg
