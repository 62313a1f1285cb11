#ifndef AXHM_CONFIG_HPP
#define AXHM_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "axhm/run.hpp"
#include "axhm/solver.hpp"

namespace axhm {

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(const std::string& msg, int line_)
      : std::runtime_error("config line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// Everything one experiment needs: grid block, physics block, initial-data
/// block, control block. Defaults give the standard production setup
/// (256^2 cells on [0,8] x [0,16), normalized coefficients, gaussian bumps).
struct RunConfig {
  int n_r = 256;
  int n_z = 256;
  double r_max = 8.0;
  double z_len = 16.0;

  PhysicalParams physics;
  InitialDataSpec initial;

  RunControl control;
  std::uint64_t seed = 1;

  GridPtr make_grid_() const { return make_grid(n_r, n_z, r_max, z_len); }
};

/// Parse a plain-text key = value document. Keys live in the sections grid,
/// physics, initial, control, addressed either by a [section] header or a
/// dotted key (e.g. "physics.nu = 0.1"). '#' and ';' start comments. Unknown
/// keys, bad values and failed validations are reported with line numbers.
RunConfig parse_config(const std::string& text);

/// Read a config file; empty path gives defaults.
RunConfig load_config_file(const std::string& path);

/// Deterministic echo of the effective configuration, parseable by
/// parse_config.
std::string render_config(const RunConfig& cfg);

std::string shape_name(Shape s);
Shape shape_from_name(const std::string& name);  // throws std::invalid_argument

}  // namespace axhm

#endif
