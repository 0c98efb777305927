#include "tridg/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tridg {

namespace {

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw std::runtime_error("invalid boolean value: " + v);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

double RunConfig::effective_cfl() const {
  if (cfl > 0.0) return cfl;
  if (order == 1) return 0.3;
  if (order == 2) return 0.15;
  return 0.1;
}

LimiterConfig RunConfig::limiter_config() const {
  LimiterConfig lc;
  lc.ck = ck;
  lc.eps = eps;
  lc.limit_all = limit_all;
  lc.characteristic = characteristic;
  lc.char_directions = char_directions;
  return lc;
}

void RunConfig::validate() const {
  if (order < 1 || order > 3)
    throw std::runtime_error("order must be 1, 2 or 3");
  if (order == 3 && limiter)
    throw std::runtime_error(
        "the CSWENO limiter supports P1 and P2 only; run order 3 with "
        "limiter=off");
  if (rk_order != 2 && rk_order != 3)
    throw std::runtime_error("rk_order must be 2 or 3");
  if (t_end < 0.0) throw std::runtime_error("t_end must be non-negative");
  if (max_steps <= 0) throw std::runtime_error("max_steps must be positive");
  if (threads < 1) throw std::runtime_error("threads must be >= 1");
  if (mesh.empty()) throw std::runtime_error("no mesh specified");
  if (char_directions < 0 || char_directions > 2)
    throw std::runtime_error("char_directions must be 0, 1 or 2");
  if (!std::ifstream(mesh)) throw std::runtime_error("mesh file not found: " + mesh);
  if (!slice.empty()) {
    double y;
    int n;
    parse_slice(slice, y, n);
  }
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("expected key=value, got: " + assignment);
  const std::string key = trim(assignment.substr(0, eq));
  const std::string val = trim(assignment.substr(eq + 1));

  if (key == "problem") cfg.problem = val;
  else if (key == "mesh") cfg.mesh = val;
  else if (key == "order") cfg.order = std::stoi(val);
  else if (key == "limiter") cfg.limiter = parse_bool(val);
  else if (key == "limit_all") cfg.limit_all = parse_bool(val);
  else if (key == "ck") cfg.ck = std::stod(val);
  else if (key == "eps") cfg.eps = std::stod(val);
  else if (key == "characteristic") cfg.characteristic = parse_bool(val);
  else if (key == "char_directions") cfg.char_directions = std::stoi(val);
  else if (key == "rk_order") cfg.rk_order = std::stoi(val);
  else if (key == "cfl") cfg.cfl = std::stod(val);
  else if (key == "t_end") cfg.t_end = std::stod(val);
  else if (key == "max_steps") cfg.max_steps = std::stol(val);
  else if (key == "threads") cfg.threads = std::stoi(val);
  else if (key == "out_dir") cfg.out_dir = val;
  else if (key == "output_every") cfg.output_every = std::stoi(val);
  else if (key == "slice") cfg.slice = val;
  else throw std::runtime_error("unknown config key: " + key);
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply_override(cfg, line);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  return cfg;
}

std::string config_log(const RunConfig& c) {
  std::ostringstream os;
  os << "problem=" << c.problem << "\n"
     << "mesh=" << c.mesh << "\n"
     << "order=" << c.order << "\n"
     << "limiter=" << (c.limiter ? "on" : "off") << "\n"
     << "limit_all=" << (c.limit_all ? "on" : "off") << "\n"
     << "ck=" << c.ck << "\n"
     << "eps=" << c.eps << "\n"
     << "characteristic=" << (c.characteristic ? "on" : "off") << "\n"
     << "char_directions=" << c.char_directions << "\n"
     << "rk_order=" << c.rk_order << "\n"
     << "cfl=" << c.effective_cfl() << (c.cfl > 0 ? "" : " (default)") << "\n"
     << "t_end=" << c.t_end << "\n"
     << "max_steps=" << c.max_steps << "\n"
     << "threads=" << c.threads << "\n"
     << "out_dir=" << c.out_dir << "\n"
     << "output_every=" << c.output_every << "\n"
     << "slice=" << c.slice << "\n";
  return os.str();
}

void parse_slice(const std::string& s, double& y, int& n) {
  // "y=<c>" or "y=<c>:<n>"
  if (s.rfind("y=", 0) != 0)
    throw std::runtime_error("slice must look like y=0.5:400, got: " + s);
  const auto colon = s.find(':');
  y = std::stod(s.substr(2, colon == std::string::npos ? std::string::npos
                                                       : colon - 2));
  n = colon == std::string::npos ? 200 : std::stoi(s.substr(colon + 1));
  if (n <= 0) throw std::runtime_error("slice sample count must be positive");
}

}  // namespace tridg
