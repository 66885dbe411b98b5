#pragma once

// Run configuration: flat `key = value` text, one entry per line, `#`
// starts a comment. Unknown or repeated keys are validation errors.

#include "kohnlab/model_potential.hpp"
#include "kohnlab/singularity_lab.hpp"
#include "kohnlab/trial_basis.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kohnlab {

/// Inclusive equidistant range lo..hi with `count` points (count 1 gives lo).
struct Range {
  double lo = 0;
  double hi = 0;
  int count = 1;

  std::vector<double> values() const;
  static Range parse(const std::string& text);  // "lo:hi:count"
  std::string str() const;
};

struct RunConfig {
  PotentialSpec potential;
  BasisSpec basis;
  std::vector<double> k{0.2};
  int p = 1001;
  double r_max = RadialGrid::kDefaultRMax;
  int nodes = RadialGrid::kDefaultOrder;  // Gauss-Legendre order per panel
  double panel_width = RadialGrid::kDefaultPanelWidth;
  double quadrature_gate = 1e-10;
  double oracle_step = 1e-4;
  Scheme scheme = Scheme::AnomalyFreeRoot;
  std::string out = "out";
  Range alpha_range{0.59, 0.605, 31};
  Range beta_range{0.65, 1.25, 61};
  Range gamma_range{0.5, 1.0, 11};
  int threads = 0;  // 0 = hardware concurrency

  /// Checks every invariant, including the radial grid against the potential
  /// and the smallest gamma in use. Throws ValidationError.
  void validate() const;

  RadialGrid grid() const;

  /// Every key with its canonical text value, as accepted by parse.
  std::map<std::string, std::string> entries() const;
};

/// Applies one key. Throws ValidationError on an unknown key or bad value.
void apply_entry(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Parses "v1,v2,..." or "lo:hi:count".
std::vector<double> parse_k_list(const std::string& text);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace kohnlab
