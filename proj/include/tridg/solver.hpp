#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "tridg/config.hpp"
#include "tridg/output.hpp"
#include "tridg/rk.hpp"

namespace tridg {

struct RunResult {
  long steps = 0;
  double t = 0.0;
  std::vector<double> dt_history;
  std::vector<int> troubled_history;  // per step, last-stage count
  bool has_error = false;
  ErrorReport error;  // against the exact solution, when available
};

/// Runs one simulation to t_end; writes VTK / slice CSV / run log into
/// cfg.out_dir when set.  Returns the final state through `final_state`
/// when non-null.
RunResult run_simulation(const RunConfig& cfg, std::ostream* console = nullptr,
                         StateField* final_state = nullptr);

struct ConvergenceRow {
  std::string mesh;
  double h = 0.0;
  double l1 = 0.0, linf = 0.0;
  double order_l1 = 0.0, order_linf = 0.0;
  long steps = 0;
};

/// Runs cfg on each mesh and tabulates L1/Linf errors with observed orders
/// (order = log(e_coarse/e_fine) / log(h_coarse/h_fine)).
std::vector<ConvergenceRow> convergence_study(RunConfig cfg,
                                              const std::vector<std::string>& meshes,
                                              std::ostream* console = nullptr);

/// Mesh loading + periodicity wiring for a problem.
Mesh load_problem_mesh(const RunConfig& cfg, const ProblemSpec& prob);

std::string format_convergence_table(const std::vector<ConvergenceRow>& rows);

}  // namespace tridg
