#include <iostream>

#include <CLI11.hpp>

#include "tridg/solver.hpp"

namespace {

void add_run_options(CLI::App* app, tridg::RunConfig& cfg,
                     std::string& config_path) {
  app->add_option("--config", config_path, "key=value config file");
  app->add_option("--mesh", cfg.mesh, "Gmsh .msh mesh file");
  app->add_option("--problem", cfg.problem, "problem name (see `info --problems`)");
  app->add_option("--order", cfg.order, "polynomial degree N (1..3)");
  app->add_option("--limiter", cfg.limiter, "CSWENO limiter on|off")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, bool>{{"on", true}, {"off", false}}));
  app->add_flag("--limit-all", cfg.limit_all,
                "limit every cell (accuracy studies)");
  app->add_option("--ck", cfg.ck, "KXRCF threshold");
  app->add_option("--characteristic", cfg.characteristic,
                  "characteristic-field limiting on|off")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, bool>{{"on", true}, {"off", false}}));
  app->add_option("--rk-order", cfg.rk_order, "TVD-RK order (2 or 3)");
  app->add_option("--cfl", cfg.cfl, "CFL number (default depends on order)");
  app->add_option("--t-end", cfg.t_end, "final time");
  app->add_option("--max-steps", cfg.max_steps, "step limit");
  app->add_option("--threads", cfg.threads, "worker threads (default 1)");
  app->add_option("--out", cfg.out_dir, "output directory for artifacts");
  app->add_option("--output-every", cfg.output_every,
                  "VTK time-series cadence in steps");
  app->add_option("--slice", cfg.slice, "line sample, e.g. y=0.5:400");
}

tridg::RunConfig finalize(const tridg::RunConfig& cli_cfg,
                          const std::string& config_path, CLI::App* app) {
  if (config_path.empty()) return cli_cfg;
  // File first, command line wins.
  tridg::RunConfig cfg = tridg::load_config(config_path);
  const tridg::RunConfig defaults;
  auto keep = [&](auto member, const char* flag) {
    if (app->count(flag) > 0) cfg.*member = cli_cfg.*member;
  };
  keep(&tridg::RunConfig::mesh, "--mesh");
  keep(&tridg::RunConfig::problem, "--problem");
  keep(&tridg::RunConfig::order, "--order");
  keep(&tridg::RunConfig::limiter, "--limiter");
  keep(&tridg::RunConfig::limit_all, "--limit-all");
  keep(&tridg::RunConfig::ck, "--ck");
  keep(&tridg::RunConfig::characteristic, "--characteristic");
  keep(&tridg::RunConfig::rk_order, "--rk-order");
  keep(&tridg::RunConfig::cfl, "--cfl");
  keep(&tridg::RunConfig::t_end, "--t-end");
  keep(&tridg::RunConfig::max_steps, "--max-steps");
  keep(&tridg::RunConfig::threads, "--threads");
  keep(&tridg::RunConfig::out_dir, "--out");
  keep(&tridg::RunConfig::output_every, "--output-every");
  keep(&tridg::RunConfig::slice, "--slice");
  return cfg;
}

int cmd_info(const std::string& mesh_path, bool list_problems) {
  if (list_problems) {
    for (const auto& n : tridg::problem_names()) std::cout << n << "\n";
    return 0;
  }
  const tridg::Mesh mesh = tridg::load_gmsh(mesh_path);
  double hmin = 1e300, hmax = 0, havg = 0, area = 0;
  int nboundary = 0;
  for (int k = 0; k < mesh.num_cells(); ++k) {
    hmin = std::min(hmin, mesh.hsize[k]);
    hmax = std::max(hmax, mesh.hsize[k]);
    havg += mesh.hsize[k];
    area += mesh.area[k];
    for (int e = 0; e < 3; ++e)
      if (mesh.neighbor[k][e] == tridg::kNoNeighbor) ++nboundary;
  }
  std::cout << "cells:          " << mesh.num_cells() << "\n"
            << "vertices:       " << mesh.vertices.size() << "\n"
            << "boundary edges: " << nboundary << "\n"
            << "total area:     " << area << "\n"
            << "h (min/avg/max): " << hmin << " / " << havg / mesh.num_cells()
            << " / " << hmax << "\n"
            << "boundary tags:  ";
  for (const auto& t : mesh.tag_names) std::cout << t << " ";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RKDG solver with compact-subcell WENO limiting on triangular meshes"};
  app.require_subcommand(1);

  tridg::RunConfig run_cfg, conv_cfg;
  std::string run_config_path, conv_config_path;
  std::vector<std::string> conv_meshes;
  std::string info_mesh;
  bool list_problems = false;

  CLI::App* run = app.add_subcommand("run", "run a single simulation");
  add_run_options(run, run_cfg, run_config_path);

  CLI::App* conv =
      app.add_subcommand("converge", "convergence study over a mesh sequence");
  add_run_options(conv, conv_cfg, conv_config_path);
  conv->add_option("--meshes", conv_meshes, "mesh files, coarse to fine")
      ->required();

  CLI::App* info = app.add_subcommand("info", "mesh statistics");
  info->add_option("--mesh", info_mesh, "Gmsh .msh mesh file");
  info->add_flag("--problems", list_problems, "list available problems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const tridg::RunConfig cfg = finalize(run_cfg, run_config_path, run);
      tridg::run_simulation(cfg, &std::cout);
      return 0;
    }
    if (conv->parsed()) {
      tridg::RunConfig cfg = finalize(conv_cfg, conv_config_path, conv);
      if (!conv_meshes.empty()) cfg.mesh = conv_meshes.front();
      const auto rows = tridg::convergence_study(cfg, conv_meshes, nullptr);
      std::cout << tridg::format_convergence_table(rows);
      if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        std::vector<std::vector<double>> csv;
        for (const auto& r : rows)
          csv.push_back({r.h, r.l1, r.order_l1, r.linf, r.order_linf,
                         static_cast<double>(r.steps)});
        tridg::write_csv({"h", "l1", "order_l1", "linf", "order_linf", "steps"},
                         csv, cfg.out_dir + "/convergence.csv");
      }
      return 0;
    }
    if (info->parsed()) {
      if (!list_problems && info_mesh.empty())
        throw std::runtime_error("info needs --mesh or --problems");
      return cmd_info(info_mesh, list_problems);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
