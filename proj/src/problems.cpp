#include "tridg/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace tridg {

State euler_primitive_to_conserved(double rho, double u, double v, double p) {
  State s;
  s << rho, rho * u, rho * v, p / (kGamma - 1.0) + 0.5 * rho * (u * u + v * v);
  return s;
}

void euler_flux(const State& u, State& f, State& g) {
  const double rho = u(0);
  if (!(rho > 0.0)) throw std::runtime_error("non-physical Euler state: rho <= 0");
  const double vx = u(1) / rho, vy = u(2) / rho;
  const double p = euler_pressure(u);
  if (!(p > 0.0)) throw std::runtime_error("non-physical Euler state: p <= 0");
  f = vx * u;
  f(1) += p;
  f(3) += p * vx;
  g = vy * u;
  g(2) += p;
  g(3) += p * vy;
}

double euler_max_speed(const State& u) {
  const double rho = u(0);
  const double vx = u(1) / rho, vy = u(2) / rho;
  const double p = euler_pressure(u);
  return std::sqrt(vx * vx + vy * vy) + std::sqrt(kGamma * p / rho);
}

void euler_eigensystem(const State& mean, int direction, Eigen::Matrix4d& L,
                       Eigen::Matrix4d& R, Eigen::Vector4d& speeds) {
  const double rho = mean(0);
  const double u = mean(1) / rho, v = mean(2) / rho;
  const double p = euler_pressure(mean);
  if (!(rho > 0.0) || !(p > 0.0))
    throw std::runtime_error("non-physical mean state in eigensystem");
  const double H = (mean(3) + p) / rho;
  const double c = std::sqrt(kGamma * p / rho);
  const double q2 = 0.5 * (u * u + v * v);

  if (direction == 0) {
    speeds << u - c, u, u, u + c;
    R << 1, 1, 0, 1,
        u - c, u, 0, u + c,
        v, v, 1, v,
        H - u * c, q2, v, H + u * c;
  } else {
    speeds << v - c, v, v, v + c;
    R << 1, 1, 0, 1,
        u, u, 1, u,
        v - c, v, 0, v + c,
        H - v * c, q2, u, H + v * c;
  }
  L = R.inverse();
}

double burgers_exact(double x, double y, double t) {
  const double xi = x + y;
  auto w0 = [](double z) { return 0.5 + std::sin(M_PI * z / 2.0); };
  auto dw0 = [](double z) { return 0.5 * M_PI * std::cos(M_PI * z / 2.0); };
  double w = w0(xi);
  for (int it = 0; it < 50; ++it) {
    const double z = xi - 2.0 * w * t;
    const double g = w - w0(z);
    const double gp = 1.0 + 2.0 * t * dw0(z);
    const double dw = g / gp;
    w -= dw;
    if (std::abs(g) < 1e-14) return w;
  }
  if (std::abs(w - w0(xi - 2.0 * w * t)) > 1e-12)
    throw std::runtime_error("characteristic iteration did not converge (past breaking time?)");
  return w;
}

// ---------------------------------------------------------------------------

namespace {

State scalar_state(double u) {
  State s = State::Zero();
  s(0) = u;
  return s;
}

State reflective_ghost(const State& u, const Vec2& n) {
  const double mn = u(1) * n.x + u(2) * n.y;
  State g = u;
  g(1) -= 2.0 * mn * n.x;
  g(2) -= 2.0 * mn * n.y;
  return g;
}

ProblemSpec euler_base() {
  ProblemSpec p;
  p.nvar = 4;
  p.flux = euler_flux;
  p.max_speed = euler_max_speed;
  p.indicator_velocity = [](const State& u) {
    return Vec2{u(1) / u(0), u(2) / u(0)};
  };
  p.indicator_vars = {0, 3};  // density and total energy
  return p;
}

ProblemSpec make_burgers_smooth() {
  ProblemSpec p;
  p.name = "burgers_smooth";
  p.nvar = 1;
  p.flux = [](const State& u, State& f, State& g) {
    f = g = State::Zero();
    f(0) = g(0) = 0.5 * u(0) * u(0);
  };
  p.max_speed = [](const State& u) { return std::sqrt(2.0) * std::abs(u(0)); };
  p.indicator_velocity = [](const State& u) { return Vec2{u(0), u(0)}; };
  p.indicator_vars = {0};
  p.initial = [](double x, double y) {
    return scalar_state(0.5 + std::sin(M_PI * (x + y) / 2.0));
  };
  p.exact = [](double x, double y, double t) {
    return scalar_state(burgers_exact(x, y, t));
  };
  p.periodic_x = p.periodic_y = true;
  p.box = {-2, -2, 2, 2};
  return p;
}

ProblemSpec make_entropy_wave() {
  ProblemSpec p = euler_base();
  p.name = "euler_entropy_wave";
  auto state = [](double x, double y, double t) {
    return euler_primitive_to_conserved(1.0 + 0.2 * std::sin(M_PI * (x + y - t)),
                                        0.7, 0.3, 1.0);
  };
  p.initial = [state](double x, double y) { return state(x, y, 0.0); };
  p.exact = state;
  p.periodic_x = p.periodic_y = true;
  p.box = {0, 0, 2, 2};
  return p;
}

ProblemSpec make_vortex() {
  ProblemSpec p = euler_base();
  p.name = "isentropic_vortex";
  auto state = [](double x, double y, double t) {
    const double x0 = 5.0, y0 = 0.0, beta = 5.0;
    const double dx = x - x0 - t, dy = y - y0;
    const double r2 = dx * dx + dy * dy;
    const double e = std::exp(1.0 - r2);
    const double rho =
        std::pow(1.0 - (kGamma - 1.0) / (16.0 * kGamma * M_PI * M_PI) * beta *
                           beta * e * e,
                 1.0 / (kGamma - 1.0));
    const double u = 1.0 - beta * e * dy / (2.0 * M_PI);
    const double v = beta * e * dx / (2.0 * M_PI);
    return euler_primitive_to_conserved(rho, u, v, std::pow(rho, kGamma));
  };
  p.initial = [state](double x, double y) { return state(x, y, 0.0); };
  p.exact = state;
  p.periodic_x = p.periodic_y = true;
  p.box = {0, -5, 10, 5};
  return p;
}

ProblemSpec make_shock_entropy() {
  ProblemSpec p = euler_base();
  p.name = "shock_entropy";
  auto init = [](double x, double) {
    if (x < 0.125)
      return euler_primitive_to_conserved(3.857143, 2.629369, 0.0, 10.333333);
    return euler_primitive_to_conserved(1.0 + 0.2 * std::sin(16.0 * M_PI * x), 0.0,
                                        0.0, 1.0);
  };
  p.initial = init;
  p.periodic_y = true;
  p.box = {0, 0, 1, 1};
  p.boundary = [init](const std::string& tag, const Vec2& x, const Vec2&, double,
                      const State& u_in) {
    if (tag == "left") return init(0.0, x.y);  // supersonic inflow
    return u_in;                               // zero-gradient outflow
  };
  return p;
}

// Mach 10 oblique shock of the double Mach reflection setup.
const State kDmrPre = euler_primitive_to_conserved(1.4, 0.0, 0.0, 1.0);
const State kDmrPost = euler_primitive_to_conserved(
    8.0, 8.25 * std::sqrt(3.0) / 2.0, -8.25 * 0.5, 116.5);

ProblemSpec make_double_mach() {
  ProblemSpec p = euler_base();
  p.name = "double_mach";
  p.initial = [](double x, double y) {
    // shock through (1/6, 0) at 60 degrees to the x-axis
    return (x < 1.0 / 6.0 + y / std::sqrt(3.0)) ? kDmrPost : kDmrPre;
  };
  p.box = {0, 0, 4, 1};
  p.boundary = [](const std::string& tag, const Vec2& x, const Vec2& n, double t,
                  const State& u_in) {
    if (tag == "left") return kDmrPost;
    if (tag == "right") return u_in;
    if (tag == "bottom") {
      if (x.x < 1.0 / 6.0) return kDmrPost;
      return reflective_ghost(u_in, n);
    }
    // top: exact motion of the Mach 10 shock
    const double xs = 1.0 / 6.0 + (1.0 + 20.0 * t) / std::sqrt(3.0);
    return x.x < xs ? kDmrPost : kDmrPre;
  };
  return p;
}

ProblemSpec make_forward_step() {
  ProblemSpec p = euler_base();
  p.name = "forward_step";
  const State inflow = euler_primitive_to_conserved(1.4, 3.0, 0.0, 1.0);
  p.initial = [inflow](double, double) { return inflow; };
  p.box = {0, 0, 4, 1};
  p.boundary = [inflow](const std::string& tag, const Vec2&, const Vec2& n,
                        double, const State& u_in) {
    if (tag == "inflow") return inflow;
    if (tag == "outflow") return u_in;
    return reflective_ghost(u_in, n);
  };
  return p;
}

ProblemSpec make_riemann(int config) {
  ProblemSpec p = euler_base();
  p.name = config == 3 ? "riemann2d_cfg3" : "riemann2d_cfg12";
  p.initial = [config](double x, double y) {
    const bool xr = x >= 0.5, yu = y >= 0.5;
    if (config == 3) {
      if (xr && yu) return euler_primitive_to_conserved(1.5, 0, 0, 1.5);
      if (!xr && yu) return euler_primitive_to_conserved(0.5323, 1.206, 0, 0.3);
      if (!xr && !yu) return euler_primitive_to_conserved(0.138, 1.206, 1.206, 0.029);
      return euler_primitive_to_conserved(0.5323, 0, 1.206, 0.3);
    }
    if (xr && yu) return euler_primitive_to_conserved(0.5313, 0, 0, 0.4);
    if (!xr && yu) return euler_primitive_to_conserved(1.0, 0.7276, 0, 1.0);
    if (!xr && !yu) return euler_primitive_to_conserved(0.8, 0, 0, 1.0);
    return euler_primitive_to_conserved(1.0, 0, 0.7276, 1.0);
  };
  p.box = {0, 0, 1, 1};
  p.boundary = [](const std::string&, const Vec2&, const Vec2&, double,
                  const State& u_in) { return u_in; };
  return p;
}

}  // namespace

ProblemSpec make_problem(const std::string& name) {
  if (name == "burgers_smooth") return make_burgers_smooth();
  if (name == "euler_entropy_wave") return make_entropy_wave();
  if (name == "isentropic_vortex") return make_vortex();
  if (name == "shock_entropy") return make_shock_entropy();
  if (name == "double_mach") return make_double_mach();
  if (name == "forward_step") return make_forward_step();
  if (name == "riemann2d_cfg3") return make_riemann(3);
  if (name == "riemann2d_cfg12") return make_riemann(12);
  throw std::runtime_error("unknown problem: " + name);
}

std::vector<std::string> problem_names() {
  return {"burgers_smooth", "euler_entropy_wave", "isentropic_vortex",
          "shock_entropy",  "double_mach",        "forward_step",
          "riemann2d_cfg3", "riemann2d_cfg12"};
}

}  // namespace tridg
