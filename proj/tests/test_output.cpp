#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tridg/output.hpp"

using namespace tridg;

namespace {

Mesh one_triangle() {
  return build_connectivity({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}},
                            {{{0, 1, 2}}});
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const char* name) {
  return std::string("tridg_test_") + name;
}

}  // namespace

TEST_CASE("VTK writer: golden file for a single triangle") {
  const Mesh m = one_triangle();
  const DgContext ctx(m, 1);
  ProblemSpec prob = make_problem("burgers_smooth");
  prob.initial = [](double, double) {
    State s = State::Zero();
    s(0) = 0.25;
    return s;
  };
  const StateField s = project(ctx, prob);
  const std::string path = tmp_path("one_tri.vtk");
  write_vtk(ctx, prob, s, path);
  const std::string text = read_file(path);
  std::remove(path.c_str());

  // Structure: legacy header, 3 points, 1 cell of type 5, cell and point data.
  CHECK(text.find("# vtk DataFile Version 4.2") == 0);
  CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(text.find("POINTS 3 double") != std::string::npos);
  CHECK(text.find("CELLS 1 4") != std::string::npos);
  CHECK(text.find("CELL_TYPES 1\n5") != std::string::npos);
  CHECK(text.find("CELL_DATA 1") != std::string::npos);
  CHECK(text.find("POINT_DATA 3") != std::string::npos);
  CHECK(text.find("SCALARS u_avg double") != std::string::npos);
  CHECK(text.find("SCALARS u double") != std::string::npos);

  // The constant projects exactly: cell average and all vertex values 0.25,
  // one value per line after each LOOKUP_TABLE (1 cell, then 3 vertices).
  std::istringstream in(text);
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    if (line.rfind("LOOKUP_TABLE", 0) != 0) continue;
    const int count = (checked == 0) ? 1 : 3;
    for (int i = 0; i < count; ++i) {
      REQUIRE(std::getline(in, line));
      CHECK(std::stod(line) == doctest::Approx(0.25).epsilon(1e-14));
      ++checked;
    }
  }
  CHECK(checked == 4);  // 1 cell value + 3 vertex values
}

TEST_CASE("CSV writer: values round-trip at full precision") {
  const std::vector<std::string> header = {"x", "u"};
  const std::vector<std::vector<double>> rows = {
      {1.0 / 3.0, -2.718281828459045},
      {1e-300, 6.02214076e23},
  };
  const std::string path = tmp_path("roundtrip.csv");
  write_csv(header, rows, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  auto next_line = [&](std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();  // RFC-4180 CRLF
    return true;
  };
  std::string line;
  REQUIRE(next_line(line));
  CHECK(line == "x,u");
  for (const auto& row : rows) {
    REQUIRE(next_line(line));
    std::istringstream ss(line);
    std::string tok;
    for (double expect : row) {
      REQUIRE(std::getline(ss, tok, ','));
      CHECK(std::stod(tok) == expect);  // bitwise after parse
    }
  }
  CHECK_FALSE(next_line(line));
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("slice sampling: monotone x, correct y, exact for P1 data") {
  Mesh m = load_gmsh(
      std::string(std::getenv("TRIDG_SOURCE_DIR")) + "/meshes/burgers_20.msh");
  const DgContext ctx(m, 1);
  ProblemSpec prob = make_problem("burgers_smooth");
  auto lin = [](double x, double y) { return 0.1 + 0.5 * x - 0.25 * y; };
  prob.initial = [&](double x, double y) {
    State s = State::Zero();
    s(0) = lin(x, y);
    return s;
  };
  const StateField s = project(ctx, prob);
  const auto rows = sample_slice(ctx, prob, s, 0.31, 200);
  REQUIRE(rows.size() > 150);  // most sample points land inside the mesh
  double prev = -1e300;
  for (const auto& r : rows) {
    REQUIRE(r.size() >= 3);
    CHECK(r[0] > prev);
    prev = r[0];
    CHECK(r[1] == doctest::Approx(0.31).epsilon(1e-14));
    // P1 represents linears exactly, so the sampled value is exact.
    CHECK(r[2] == doctest::Approx(lin(r[0], 0.31)).epsilon(1e-11));
  }
}

TEST_CASE("variable names: scalar and Euler") {
  const auto b = variable_names(make_problem("burgers_smooth"));
  REQUIRE(b.size() == 1);
  CHECK(b[0] == "u");
  const auto e = variable_names(make_problem("riemann2d_cfg3"));
  REQUIRE(e.size() == 4);
  CHECK(e[0] == "rho");
  CHECK(e[3] == "E");
}
