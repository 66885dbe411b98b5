#include "kohnlab/run_config.hpp"

#include "kohnlab/errors.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace kohnlab {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ValidationError("config: '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ValidationError("config: '" + key + "' expects an integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::vector<double> Range::values() const {
  std::vector<double> out;
  if (count == 1) return {lo};
  for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
  return out;
}

Range Range::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ValidationError("range '" + text + "' must be lo:hi:count");
  Range r{parse_double("range", parts[0]), parse_double("range", parts[1]),
          parse_int("range", parts[2])};
  if (r.count < 1) throw ValidationError("range '" + text + "': count must be >= 1");
  if (r.hi < r.lo) throw ValidationError("range '" + text + "': hi below lo");
  return r;
}

std::string Range::str() const {
  return format_double(lo) + ":" + format_double(hi) + ":" + std::to_string(count);
}

std::vector<double> parse_k_list(const std::string& text) {
  if (text.find(':') != std::string::npos) return Range::parse(text).values();
  if (trim(text).empty()) throw ValidationError("config: 'k' is empty");
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) {
    if (trim(item).empty()) throw ValidationError("config: 'k' has an empty entry in '" + text + "'");
    out.push_back(parse_double("k", trim(item)));
  }
  return out;
}

void apply_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "potential") {
    cfg.potential.kind = parse_potential_kind(v);
    if (cfg.potential.kind == PotentialKind::Zero) cfg.potential.strength = 0;
  } else if (key == "strength") {
    cfg.potential.strength = parse_double(key, v);
  } else if (key == "range") {
    cfg.potential.range = parse_double(key, v);
  } else if (key == "gamma") {
    cfg.basis.gamma = parse_double(key, v);
  } else if (key == "c") {
    cfg.basis.c = parse_double(key, v);
  } else if (key == "alpha") {
    cfg.basis.alpha = parse_double(key, v);
  } else if (key == "beta") {
    cfg.basis.beta = parse_double(key, v);
  } else if (key == "m1") {
    cfg.basis.m1 = parse_int(key, v);
  } else if (key == "m2") {
    cfg.basis.m2 = parse_int(key, v);
  } else if (key == "norm") {
    cfg.basis.norm = parse_double(key, v);
  } else if (key == "k") {
    cfg.k = parse_k_list(v);
  } else if (key == "p") {
    cfg.p = parse_int(key, v);
  } else if (key == "r_max") {
    cfg.r_max = parse_double(key, v);
  } else if (key == "nodes") {
    cfg.nodes = parse_int(key, v);
  } else if (key == "panel_width") {
    cfg.panel_width = parse_double(key, v);
  } else if (key == "quadrature_gate") {
    cfg.quadrature_gate = parse_double(key, v);
  } else if (key == "oracle_step") {
    cfg.oracle_step = parse_double(key, v);
  } else if (key == "scheme") {
    cfg.scheme = parse_scheme(v);
  } else if (key == "out") {
    if (v.empty()) throw ValidationError("config: 'out' is empty");
    cfg.out = v;
  } else if (key == "alpha_range") {
    cfg.alpha_range = Range::parse(v);
  } else if (key == "beta_range") {
    cfg.beta_range = Range::parse(v);
  } else if (key == "gamma_range") {
    cfg.gamma_range = Range::parse(v);
  } else if (key == "threads") {
    cfg.threads = parse_int(key, v);
  } else {
    throw ValidationError("config: unknown key '" + key + "'");
  }
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ValidationError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ValidationError(where + "repeated key '" + key + "'");
    try {
      apply_entry(cfg, key, line.substr(eq + 1));
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

RadialGrid RunConfig::grid() const {
  return RadialGrid::build(r_max, nodes, panel_width, potential.breakpoints());
}

void RunConfig::validate() const {
  potential.validate();
  basis.validate();
  if (p < 3) throw ValidationError("config: p must be >= 3 (got " + std::to_string(p) + ")");
  if (k.empty()) throw ValidationError("config: no k values");
  for (double x : k) {
    if (!(x > 0 && std::isfinite(x))) {
      throw ValidationError("config: k values must be positive (got " + format_double(x) + ")");
    }
  }
  if (!(oracle_step > 0)) throw ValidationError("config: oracle_step must be positive");
  if (!(quadrature_gate > 0)) throw ValidationError("config: quadrature_gate must be positive");
  if (threads < 0) throw ValidationError("config: threads must be >= 0");
  for (const Range* r : {&alpha_range, &beta_range, &gamma_range}) {
    if (!(r->lo > 0)) throw ValidationError("config: scan ranges must be positive");
  }
  validate_grid(grid(), potential, basis.gamma);
}

std::map<std::string, std::string> RunConfig::entries() const {
  std::string ks;
  for (std::size_t i = 0; i < k.size(); ++i) ks += (i ? "," : "") + format_double(k[i]);
  return {
      {"potential", to_string(potential.kind)},
      {"strength", format_double(potential.strength)},
      {"range", format_double(potential.range)},
      {"gamma", format_double(basis.gamma)},
      {"c", format_double(basis.c)},
      {"alpha", format_double(basis.alpha)},
      {"beta", format_double(basis.beta)},
      {"m1", std::to_string(basis.m1)},
      {"m2", std::to_string(basis.m2)},
      {"norm", format_double(basis.norm)},
      {"k", ks},
      {"p", std::to_string(p)},
      {"r_max", format_double(r_max)},
      {"nodes", std::to_string(nodes)},
      {"panel_width", format_double(panel_width)},
      {"quadrature_gate", format_double(quadrature_gate)},
      {"oracle_step", format_double(oracle_step)},
      {"scheme", to_string(scheme)},
      {"out", out},
      {"alpha_range", alpha_range.str()},
      {"beta_range", beta_range.str()},
      {"gamma_range", gamma_range.str()},
      {"threads", std::to_string(threads)},
  };
}

}  // namespace kohnlab
