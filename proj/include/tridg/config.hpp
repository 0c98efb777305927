#pragma once

#include <string>

#include "tridg/limiter.hpp"

namespace tridg {

struct RunConfig {
  std::string problem = "burgers_smooth";
  std::string mesh;
  int order = 1;  // polynomial degree N
  bool limiter = true;
  bool limit_all = false;
  double ck = 1.0;
  double eps = 1e-10;
  bool characteristic = true;
  int char_directions = 2;
  int rk_order = 3;
  double cfl = -1.0;  // negative: default for the order
  double t_end = 0.1;
  long max_steps = 1000000;
  int threads = 1;
  std::string out_dir;  // empty: no artifacts
  int output_every = 0;  // VTK cadence in steps (0: final state only)
  std::string slice;     // e.g. "y=0.5:400"

  double effective_cfl() const;
  LimiterConfig limiter_config() const;
  void validate() const;
};

/// Flat key=value config file; '#' starts a comment.
RunConfig load_config(const std::string& path);

/// Applies a single "key=value" override; throws on unknown keys.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// All settings in key=value form, one per line (run-log provenance).
std::string config_log(const RunConfig& cfg);

/// Parses "y=<c>:<n>" slice requests.
void parse_slice(const std::string& s, double& y, int& n);

}  // namespace tridg
