#include "axhm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "axhm/csv.hpp"

namespace axhm {

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::gaussian: return "gaussian";
    case Shape::ring: return "ring";
    case Shape::zero: return "zero";
  }
  return "gaussian";
}

Shape shape_from_name(const std::string& name) {
  if (name == "gaussian") return Shape::gaussian;
  if (name == "ring") return Shape::ring;
  if (name == "zero") return Shape::zero;
  throw std::invalid_argument("unknown shape '" + name + "' (gaussian|ring|zero)");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, int line) {
  double x = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("expected a number, got '" + v + "'", line);
  return x;
}

long to_long(const std::string& v, int line) {
  long x = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("expected an integer, got '" + v + "'", line);
  return x;
}

std::uint64_t to_u64(const std::string& v, int line) {
  std::uint64_t x = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("expected an unsigned integer, got '" + v + "'", line);
  return x;
}

double nonneg(double v, const char* name, int line) {
  if (!(v >= 0.0)) throw ConfigError(std::string(name) + " must be >= 0", line);
  return v;
}

void apply_key(RunConfig& c, const std::string& key, const std::string& val, int line) {
  // grid
  if (key == "grid.n_r") {
    c.n_r = static_cast<int>(to_long(val, line));
    if (c.n_r < 8) throw ConfigError("n_r must be >= 8", line);
    return;
  }
  if (key == "grid.n_z") {
    c.n_z = static_cast<int>(to_long(val, line));
    if (c.n_z < 8) throw ConfigError("n_z must be >= 8", line);
    return;
  }
  if (key == "grid.r_max") { c.r_max = to_double(val, line); return; }
  if (key == "grid.z_len") { c.z_len = to_double(val, line); return; }
  // physics
  if (key == "physics.nu") { c.physics.nu = nonneg(to_double(val, line), "nu", line); return; }
  if (key == "physics.hall") { c.physics.hall = nonneg(to_double(val, line), "hall", line); return; }
  if (key == "physics.mu0_inv") { c.physics.mu0_inv = nonneg(to_double(val, line), "mu0_inv", line); return; }
  // initial
  if (key == "initial.eps") { c.initial.eps = nonneg(to_double(val, line), "eps", line); return; }
  if (key == "initial.h_amp") { c.initial.h_amp = to_double(val, line); return; }
  if (key == "initial.omega_amp") { c.initial.omega_amp = to_double(val, line); return; }
  auto shape_of = [&](const std::string& v) -> Shape {
    try {
      return shape_from_name(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line);
    }
  };
  if (key == "initial.swirl_shape") { c.initial.swirl_shape.shape = shape_of(val); return; }
  if (key == "initial.swirl_r_width") { c.initial.swirl_shape.r_width = to_double(val, line); return; }
  if (key == "initial.swirl_z_width") { c.initial.swirl_shape.z_width = to_double(val, line); return; }
  if (key == "initial.swirl_z_center") { c.initial.swirl_shape.z_center = to_double(val, line); return; }
  if (key == "initial.h_shape") { c.initial.h_shape.shape = shape_of(val); return; }
  if (key == "initial.h_r_width") { c.initial.h_shape.r_width = to_double(val, line); return; }
  if (key == "initial.h_z_width") { c.initial.h_shape.z_width = to_double(val, line); return; }
  if (key == "initial.h_z_center") { c.initial.h_shape.z_center = to_double(val, line); return; }
  if (key == "initial.omega_shape") { c.initial.omega_shape.shape = shape_of(val); return; }
  if (key == "initial.omega_r_width") { c.initial.omega_shape.r_width = to_double(val, line); return; }
  if (key == "initial.omega_z_width") { c.initial.omega_shape.z_width = to_double(val, line); return; }
  if (key == "initial.omega_z_center") { c.initial.omega_shape.z_center = to_double(val, line); return; }
  // control
  if (key == "control.t_end") { c.control.t_end = nonneg(to_double(val, line), "t_end", line); return; }
  if (key == "control.cfl_safety") {
    c.control.cfl_safety = to_double(val, line);
    if (!(c.control.cfl_safety > 0.0 && c.control.cfl_safety <= 1.0))
      throw ConfigError("cfl_safety must be in (0, 1]", line);
    return;
  }
  if (key == "control.dt_min") {
    c.control.dt_min = to_double(val, line);
    if (!(c.control.dt_min > 0.0)) throw ConfigError("dt_min must be > 0", line);
    return;
  }
  if (key == "control.record_every") {
    c.control.record_every = static_cast<int>(to_long(val, line));
    if (c.control.record_every < 1) throw ConfigError("record_every must be >= 1", line);
    return;
  }
  if (key == "control.norm_cap") {
    c.control.norm_cap = to_double(val, line);
    if (!(c.control.norm_cap > 0.0)) throw ConfigError("norm_cap must be > 0", line);
    return;
  }
  if (key == "control.checkpoint_every") {
    c.control.checkpoint_every = static_cast<int>(to_long(val, line));
    if (c.control.checkpoint_every < 0) throw ConfigError("checkpoint_every must be >= 0", line);
    return;
  }
  if (key == "control.out_dir") { c.control.out_dir = val; return; }
  if (key == "control.seed") { c.seed = to_u64(val, line); return; }
  throw ConfigError("unknown key '" + key + "'", line);
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg, 0); };
  if (c.n_r < 8 || c.n_z < 8) fail("grid must have n_r, n_z >= 8");
  if (!(c.r_max > 0.0) || !(c.z_len > 0.0)) fail("grid extents must be positive");
  if (!(c.physics.nu >= 0.0)) fail("nu must be >= 0");
  if (!(c.physics.hall >= 0.0)) fail("hall must be >= 0");
  if (!(c.physics.mu0_inv >= 0.0)) fail("mu0_inv must be >= 0");
  if (!(c.initial.eps >= 0.0)) fail("eps must be >= 0");
  if (!std::isfinite(c.initial.h_amp) || !std::isfinite(c.initial.omega_amp))
    fail("amplitudes must be finite");
  for (const BumpSpec* b : {&c.initial.swirl_shape, &c.initial.h_shape, &c.initial.omega_shape})
    if (!(b->r_width > 0.0) || !(b->z_width > 0.0)) fail("bump widths must be positive");
  if (!(c.control.t_end >= 0.0)) fail("t_end must be >= 0");
  if (!(c.control.cfl_safety > 0.0 && c.control.cfl_safety <= 1.0))
    fail("cfl_safety must be in (0, 1]");
  if (!(c.control.dt_min > 0.0)) fail("dt_min must be > 0");
  if (c.control.record_every < 1) fail("record_every must be >= 1");
  if (!(c.control.norm_cap > 0.0)) fail("norm_cap must be > 0");
  if (c.control.checkpoint_every < 0) fail("checkpoint_every must be >= 0");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = raw;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "grid" && section != "physics" && section != "initial" &&
          section != "control")
        throw ConfigError("unknown section '" + section + "'", line_no);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    if (val.empty()) throw ConfigError("missing value for '" + key + "'", line_no);
    if (key.find('.') == std::string::npos) {
      if (section.empty())
        throw ConfigError("key '" + key + "' outside any section; use section.key or [section]",
                          line_no);
      key = section + "." + key;
    }
    apply_key(cfg, key, val, line_no);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  if (path.empty()) return RunConfig{};
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const RunConfig& c) {
  std::ostringstream os;
  auto d = [](double x) { return format_double(x); };
  os << "[grid]\n";
  os << "n_r = " << c.n_r << "\n";
  os << "n_z = " << c.n_z << "\n";
  os << "r_max = " << d(c.r_max) << "\n";
  os << "z_len = " << d(c.z_len) << "\n";
  os << "[physics]\n";
  os << "nu = " << d(c.physics.nu) << "\n";
  os << "hall = " << d(c.physics.hall) << "\n";
  os << "mu0_inv = " << d(c.physics.mu0_inv) << "\n";
  os << "[initial]\n";
  os << "eps = " << d(c.initial.eps) << "\n";
  os << "h_amp = " << d(c.initial.h_amp) << "\n";
  os << "omega_amp = " << d(c.initial.omega_amp) << "\n";
  auto bump = [&](const std::string& prefix, const BumpSpec& b) {
    os << prefix << "_shape = " << shape_name(b.shape) << "\n";
    os << prefix << "_r_width = " << d(b.r_width) << "\n";
    os << prefix << "_z_width = " << d(b.z_width) << "\n";
    os << prefix << "_z_center = " << d(b.z_center) << "\n";
  };
  bump("swirl", c.initial.swirl_shape);
  bump("h", c.initial.h_shape);
  bump("omega", c.initial.omega_shape);
  os << "[control]\n";
  os << "t_end = " << d(c.control.t_end) << "\n";
  os << "cfl_safety = " << d(c.control.cfl_safety) << "\n";
  os << "dt_min = " << d(c.control.dt_min) << "\n";
  os << "record_every = " << c.control.record_every << "\n";
  os << "norm_cap = " << d(c.control.norm_cap) << "\n";
  os << "checkpoint_every = " << c.control.checkpoint_every << "\n";
  if (!c.control.out_dir.empty()) os << "out_dir = " << c.control.out_dir << "\n";
  os << "seed = " << c.seed << "\n";
  return os.str();
}

}  // namespace axhm
