#pragma once

#include <string>
#include <vector>

#include "tridg/dg.hpp"

namespace tridg {

/// Names of the state variables of a problem (plus derived pressure for
/// Euler, appended by the writers).
std::vector<std::string> variable_names(const ProblemSpec& prob);

/// Legacy ASCII VTK unstructured grid: cell-average CELL_DATA and
/// vertex-evaluated POINT_DATA for every conserved variable, plus pressure
/// for Euler systems.
void write_vtk(const DgContext& ctx, const ProblemSpec& prob,
               const StateField& state, const std::string& path);

/// RFC-4180 CSV with a header row; values at 17 significant digits.
void write_csv(const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               const std::string& path);

/// Samples the solution along the horizontal line y = c at n equispaced
/// x positions across the mesh extent.  Each row is
/// (x, y, vars..., pressure-for-Euler); points outside the mesh are skipped.
std::vector<std::vector<double>> sample_slice(const DgContext& ctx,
                                              const ProblemSpec& prob,
                                              const StateField& state, double y,
                                              int n);

}  // namespace tridg
