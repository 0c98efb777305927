#include "tridg/output.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tridg {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::vector<std::string> variable_names(const ProblemSpec& prob) {
  if (prob.nvar == 1) return {"u"};
  return {"rho", "rho_u", "rho_v", "E"};
}

void write_vtk(const DgContext& ctx, const ProblemSpec& prob,
               const StateField& state, const std::string& path) {
  const Mesh& mesh = *ctx.mesh;
  const int K = mesh.num_cells();
  const int nv = static_cast<int>(mesh.vertices.size());
  const auto names = variable_names(prob);
  const bool euler = prob.nvar == 4;

  std::ofstream f = open_out(path);
  f << "# vtk DataFile Version 4.2\n";
  f << prob.name << " t=" << fmt(state.t) << "\n";
  f << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  f << "POINTS " << nv << " double\n";
  for (const Vec2& v : mesh.vertices) f << fmt(v.x) << " " << fmt(v.y) << " 0\n";
  f << "CELLS " << K << " " << 4 * K << "\n";
  for (const auto& t : mesh.tris)
    f << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  f << "CELL_TYPES " << K << "\n";
  for (int k = 0; k < K; ++k) f << "5\n";

  f << "CELL_DATA " << K << "\n";
  for (int v = 0; v < prob.nvar; ++v) {
    f << "SCALARS " << names[v] << "_avg double\nLOOKUP_TABLE default\n";
    for (int k = 0; k < K; ++k) f << fmt(cell_average(state, k, v)) << "\n";
  }
  if (euler) {
    f << "SCALARS pressure_avg double\nLOOKUP_TABLE default\n";
    for (int k = 0; k < K; ++k) {
      State u;
      for (int v = 0; v < 4; ++v) u(v) = cell_average(state, k, v);
      f << fmt(euler_pressure(u)) << "\n";
    }
  }

  // Vertex values: DG point values averaged over the incident cells.
  std::vector<std::vector<double>> pt(prob.nvar, std::vector<double>(nv, 0.0));
  std::vector<int> mult(nv, 0);
  const RefPoint corner[3] = {{-1, -1}, {1, -1}, {-1, 1}};
  for (int k = 0; k < K; ++k)
    for (int c = 0; c < 3; ++c) {
      const int vid = mesh.tris[k][c];
      ++mult[vid];
      for (int v = 0; v < prob.nvar; ++v) {
        double val = 0.0;
        for (int m = 0; m < ctx.basis.num_modes(); ++m)
          val += state.cell(k, v)[m] *
                 ctx.basis.value(m, corner[c].r, corner[c].s);
        pt[v][vid] += val;
      }
    }
  f << "POINT_DATA " << nv << "\n";
  for (int v = 0; v < prob.nvar; ++v) {
    f << "SCALARS " << names[v] << " double\nLOOKUP_TABLE default\n";
    for (int i = 0; i < nv; ++i) f << fmt(pt[v][i] / std::max(mult[i], 1)) << "\n";
  }
  if (euler) {
    f << "SCALARS pressure double\nLOOKUP_TABLE default\n";
    for (int i = 0; i < nv; ++i) {
      State u;
      for (int v = 0; v < 4; ++v) u(v) = pt[v][i] / std::max(mult[i], 1);
      f << fmt(euler_pressure(u)) << "\n";
    }
  }
  if (!f) throw std::runtime_error("write failure: " + path);
}

void write_csv(const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               const std::string& path) {
  std::ofstream f = open_out(path);
  for (size_t i = 0; i < header.size(); ++i)
    f << header[i] << (i + 1 < header.size() ? "," : "");
  f << "\r\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      f << fmt(row[i]) << (i + 1 < row.size() ? "," : "");
    f << "\r\n";
  }
  if (!f) throw std::runtime_error("write failure: " + path);
}

std::vector<std::vector<double>> sample_slice(const DgContext& ctx,
                                              const ProblemSpec& prob,
                                              const StateField& state, double y,
                                              int n) {
  const Mesh& mesh = *ctx.mesh;
  double xmin = mesh.vertices[0].x, xmax = xmin;
  for (const Vec2& v : mesh.vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
  }

  std::vector<std::vector<double>> rows;
  int hint = 0;  // consecutive samples usually land in nearby cells
  for (int i = 0; i < n; ++i) {
    const Vec2 p{xmin + (xmax - xmin) * (i + 0.5) / n, y};
    int cell = -1;
    for (int off = 0; off < mesh.num_cells(); ++off) {
      const int k = (hint + off) % mesh.num_cells();
      if (point_in_tri(p, mesh.cell_tri(k), 1e-10)) {
        cell = k;
        break;
      }
    }
    if (cell < 0) continue;
    hint = cell;
    const RefPoint r = AffineMap(mesh.cell_tri(cell)).to_reference(p);
    std::vector<double> row = {p.x, p.y};
    State u = State::Zero();
    for (int v = 0; v < prob.nvar; ++v) {
      double val = 0.0;
      for (int m = 0; m < ctx.basis.num_modes(); ++m)
        val += state.cell(cell, v)[m] * ctx.basis.value(m, r.r, r.s);
      u(v) = val;
      row.push_back(val);
    }
    if (prob.nvar == 4) row.push_back(euler_pressure(u));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tridg
