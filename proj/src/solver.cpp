#include "tridg/solver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace tridg {

Mesh load_problem_mesh(const RunConfig& cfg, const ProblemSpec& prob) {
  Mesh mesh = load_gmsh(cfg.mesh);
  if (prob.periodic_x || prob.periodic_y)
    apply_periodicity(mesh, prob.periodic_x, prob.periodic_y, prob.box);
  return mesh;
}

RunResult run_simulation(const RunConfig& cfg, std::ostream* console,
                         StateField* final_state) {
  cfg.validate();
  const ProblemSpec prob = make_problem(cfg.problem);
  const Mesh mesh = load_problem_mesh(cfg, prob);
  DgContext ctx(mesh, cfg.order);
  ctx.nthreads = cfg.threads;

  const bool artifacts = !cfg.out_dir.empty();
  std::ofstream log;
  if (artifacts) {
    std::filesystem::create_directories(cfg.out_dir);
    log.open(cfg.out_dir + "/run.log");
    log << "# run configuration\n" << config_log(cfg) << "# step log\n";
  }

  StateField state = project(ctx, prob);
  std::unique_ptr<CswenoLimiter> limiter;
  if (cfg.limiter) limiter = std::make_unique<CswenoLimiter>(ctx, cfg.limiter_config());

  const RKScheme scheme = RKScheme::make(cfg.rk_order);
  auto limit_fn = [&](StateField& s, double t) {
    if (limiter) limiter->apply(prob, s, t);
  };
  if (limiter) limiter->apply(prob, state, 0.0);

  RunResult res;
  std::vector<double> cell_speed;
  double t = 0.0;
  while (t < cfg.t_end && res.steps < cfg.max_steps) {
    max_wave_speed(ctx, prob, state, cell_speed);
    double dt = compute_dt(ctx, cell_speed, cfg.effective_cfl());
    if (!(dt < cfg.t_end - t)) dt = cfg.t_end - t;
    rk_step(ctx, prob, scheme, state, t, dt, limit_fn);
    t += dt;
    state.t = t;
    ++res.steps;
    res.dt_history.push_back(dt);
    const int troubled = limiter ? limiter->last_flags().count : 0;
    res.troubled_history.push_back(troubled);
    if (artifacts) {
      log << "step=" << res.steps << " t=" << std::setprecision(12) << t
          << " dt=" << dt << " troubled=" << troubled << "\n";
      if (cfg.output_every > 0 && res.steps % cfg.output_every == 0) {
        std::ostringstream name;
        name << cfg.out_dir << "/state_" << std::setw(6) << std::setfill('0')
             << res.steps << ".vtk";
        write_vtk(ctx, prob, state, name.str());
      }
    }
  }
  res.t = t;

  if (prob.has_exact()) {
    res.has_error = true;
    res.error = error_norms(ctx, state, prob.exact, 0);
  }

  if (artifacts) {
    write_vtk(ctx, prob, state, cfg.out_dir + "/final.vtk");
    if (!cfg.slice.empty()) {
      double yc;
      int n;
      parse_slice(cfg.slice, yc, n);
      auto rows = sample_slice(ctx, prob, state, yc, n);
      std::vector<std::string> header = {"x", "y"};
      for (const auto& v : variable_names(prob)) header.push_back(v);
      if (prob.nvar == 4) header.push_back("pressure");
      write_csv(header, rows, cfg.out_dir + "/slice.csv");
    }
    log << "# finished steps=" << res.steps << " t=" << res.t;
    if (res.has_error)
      log << " L1=" << std::setprecision(6) << res.error.l1
          << " Linf=" << res.error.linf;
    log << "\n";
  }
  if (console) {
    *console << cfg.problem << " N=" << cfg.order << " steps=" << res.steps
             << " t=" << res.t;
    if (res.has_error)
      *console << " L1=" << std::scientific << std::setprecision(3)
               << res.error.l1 << " Linf=" << res.error.linf
               << std::defaultfloat;
    *console << "\n";
  }
  if (final_state) *final_state = std::move(state);
  return res;
}

std::vector<ConvergenceRow> convergence_study(RunConfig cfg,
                                              const std::vector<std::string>& meshes,
                                              std::ostream* console) {
  const ProblemSpec probe = make_problem(cfg.problem);
  if (!probe.has_exact())
    throw std::runtime_error("convergence study needs an exact solution: " +
                             cfg.problem);
  std::vector<ConvergenceRow> rows;
  for (const std::string& m : meshes) {
    cfg.mesh = m;
    cfg.out_dir.clear();
    StateField state;
    const RunResult r = run_simulation(cfg, nullptr, &state);

    ConvergenceRow row;
    row.mesh = m;
    row.h = r.error.h;
    row.l1 = r.error.l1;
    row.linf = r.error.linf;
    row.steps = r.steps;
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      const double lh = std::log(prev.h / row.h);
      row.order_l1 = std::log(prev.l1 / row.l1) / lh;
      row.order_linf = std::log(prev.linf / row.linf) / lh;
    }
    rows.push_back(row);
    if (console) *console << format_convergence_table({rows.back()});
  }
  return rows;
}

std::string format_convergence_table(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    os << std::scientific << std::setprecision(3) << "h=" << r.h
       << "  L1=" << r.l1 << "  order=" << std::fixed << std::setprecision(2)
       << r.order_l1 << "  Linf=" << std::scientific << std::setprecision(3)
       << r.linf << "  order=" << std::fixed << std::setprecision(2)
       << r.order_linf << "  steps=" << r.steps << "\n";
  }
  return os.str();
}

}  // namespace tridg
