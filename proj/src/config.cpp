#include "anisopede/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anisopede {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Parser {
  std::string path;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
  }

  double num(const std::string& key, const std::string& v) const {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      fail("bad number for '" + key + "': '" + v + "'");
    }
  }

  long integer(const std::string& key, const std::string& v) const {
    try {
      std::size_t pos = 0;
      const long x = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      fail("bad integer for '" + key + "': '" + v + "'");
    }
  }

  bool flag(const std::string& key, const std::string& v) const {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    fail("bad flag for '" + key + "': '" + v + "' (want on/off)");
  }
};

}  // namespace

FileConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::stringstream whole;
  whole << in.rdbuf();

  FileConfig cfg;
  cfg.raw = whole.str();

  int nx = 0, ny = 0, nz = 0;
  double h = 0.0;
  bool saw_nx = false, saw_ny = false, saw_nz = false, saw_h = false;
  bool saw_builtin = false;

  Parser p{path, 0};
  std::string section;
  std::istringstream lines(cfg.raw);
  std::string raw_line;
  while (std::getline(lines, raw_line)) {
    ++p.line;
    const std::string s = trim(raw_line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') p.fail("unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "grid" && section != "physics" && section != "time" &&
          section != "output" && section != "initial" && section != "monitor" &&
          section != "run")
        p.fail("unknown section '[" + section + "]'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) p.fail("empty key");
    if (section.empty()) p.fail("key '" + key + "' outside any section");

    auto unknown = [&]() { p.fail("unknown key '" + section + "." + key + "'"); };

    if (section == "grid") {
      if (key == "nx") nx = int(p.integer(key, val)), saw_nx = true;
      else if (key == "ny") ny = int(p.integer(key, val)), saw_ny = true;
      else if (key == "nz") nz = int(p.integer(key, val)), saw_nz = true;
      else if (key == "h") h = p.num(key, val), saw_h = true;
      else unknown();
    } else if (section == "physics") {
      if (key == "eps") {
        cfg.solver.physics.eps = p.num(key, val);
        if (cfg.solver.physics.eps < 0.0) p.fail("'eps' must be >= 0");
      } else if (key == "f0") {
        cfg.solver.physics.f0 = p.num(key, val);
      } else unknown();
    } else if (section == "time") {
      if (key == "dt") {
        cfg.solver.time.dt = p.num(key, val);
        if (!(cfg.solver.time.dt > 0.0)) p.fail("'dt' must be positive");
      } else if (key == "t_end") {
        cfg.solver.time.t_end = p.num(key, val);
        if (cfg.solver.time.t_end < 0.0) p.fail("'t_end' must be >= 0");
      } else if (key == "cfl") {
        if (val == "off") {
          cfg.solver.time.adaptive = false;
        } else {
          const double c = p.num(key, val);
          if (!(c > 0.0) || c > 1.0) p.fail("'cfl' must lie in (0, 1] or be 'off'");
          cfg.solver.time.adaptive = true;
          cfg.solver.time.cfl_safety = c;
        }
      } else unknown();
    } else if (section == "output") {
      if (key == "cadence") {
        cfg.solver.cadence = p.num(key, val);
        if (!(cfg.solver.cadence > 0.0)) p.fail("'cadence' must be positive");
      } else if (key == "directory") {
        if (val.empty()) p.fail("'directory' must not be empty");
        cfg.out_dir = val;
      } else if (key == "snapshots") {
        cfg.write_snapshots = p.flag(key, val);
      } else unknown();
    } else if (section == "initial") {
      if (key == "builtin") {
        cfg.initial = val;
        saw_builtin = true;
      } else if (key == "v1") cfg.v1_path = val;
      else if (key == "v2") cfg.v2_path = val;
      else if (key == "T") cfg.T_path = val;
      else unknown();
    } else if (section == "monitor") {
      if (key == "m") {
        cfg.solver.monitor.m_exp = p.num(key, val);
        if (!(cfg.solver.monitor.m_exp > 2.0)) p.fail("'m' must be > 2");
      } else if (key == "q") {
        cfg.solver.monitor.q_exp = p.num(key, val);
        if (!(cfg.solver.monitor.q_exp >= 2.0)) p.fail("'q' must be >= 2");
      } else if (key == "r") {
        cfg.solver.monitor.r_exp = p.num(key, val);
        if (!(cfg.solver.monitor.r_exp > 2.0)) p.fail("'r' must be > 2");
      } else if (key == "qmax") {
        cfg.solver.monitor.qmax = int(p.integer(key, val));
        if (cfg.solver.monitor.qmax < 2) p.fail("'qmax' must be >= 2");
      } else if (key == "r0") {
        cfg.solver.monitor.r0 = p.num(key, val);
        if (!(cfg.solver.monitor.r0 > 0.0) || cfg.solver.monitor.r0 > 0.5)
          p.fail("'r0' must lie in (0, 1/2]");
      } else if (key == "delta0") {
        cfg.solver.monitor.delta0 = p.num(key, val);
        if (!(cfg.solver.monitor.delta0 > 0.0)) p.fail("'delta0' must be positive");
      } else if (key == "stride") {
        cfg.solver.monitor.center_stride = int(p.integer(key, val));
        if (cfg.solver.monitor.center_stride < 1) p.fail("'stride' must be >= 1");
      } else unknown();
    } else if (section == "run") {
      if (key == "seed") {
        const long v = p.integer(key, val);
        if (v < 0) p.fail("'seed' must be >= 0");
        cfg.seed = std::uint64_t(v);
      } else unknown();
    }
  }

  p.line = 0;
  if (!saw_nx || !saw_ny || !saw_nz || !saw_h)
    throw std::runtime_error(path + ": [grid] must set nx, ny, nz and h");
  cfg.solver.grid = make_grid(nx, ny, nz, h);

  const bool any_snap = !cfg.v1_path.empty() || !cfg.v2_path.empty() || !cfg.T_path.empty();
  if (any_snap) {
    if (saw_builtin)
      throw std::runtime_error(path + ": [initial] mixes builtin and snapshot paths");
    if (cfg.v1_path.empty() || cfg.v2_path.empty() || cfg.T_path.empty())
      throw std::runtime_error(path + ": [initial] snapshot mode needs v1, v2 and T");
    cfg.initial = "snapshot";
  }
  return cfg;
}

}  // namespace anisopede
