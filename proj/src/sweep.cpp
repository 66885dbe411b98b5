#include "kohnlab/sweep.hpp"

#include "kohnlab/errors.hpp"
#include "kohnlab/linalg.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

namespace kohnlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLowLambdaRel = 1e-3;

using json = nlohmann::ordered_json;

std::array<Real, 3> lambda_angles() {
  return {Real(0), kPi<Real> / 4, kPi<Real> / 2};
}

std::array<double, 3> lambdas_at(const ElementTable& t) {
  std::array<double, 3> out{};
  const auto angles = lambda_angles();
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = to_double(conditioning<Real>(rotate_table(t, angles[i]).a).lambda);
  }
  return out;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << join(header, ",") << "\n";
  for (const auto& r : rows) out << join(r, ",") << "\n";
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json report_json(const SingularityReport& r) {
  json j;
  j["k"] = r.k;
  j["coeffs"] = {{"A", to_double(r.coeffs.a)},
                 {"B", to_double(r.coeffs.b)},
                 {"C", to_double(r.coeffs.c)},
                 {"scale", to_double(r.coeffs.scale)}};
  j["degenerate"] = r.degenerate;
  json roots = json::array();
  for (std::size_t i = 0; i < r.roots.real.size(); ++i) {
    json root{{"tau", to_double(r.roots.real[i])}};
    if (i < r.classes.size()) {
      const Classification& c = r.classes[i];
      root["class"] = to_string(c.cls);
      root["eta_hat"] = c.eta_hat;
      root["deviation_below"] = c.below;
      root["deviation_above"] = c.above;
    }
    roots.push_back(root);
  }
  j["real_roots"] = roots;
  if (r.roots.complex_pair) {
    j["complex_pair"] = {{"re", r.roots.complex_pair->re}, {"im", r.roots.complex_pair->im}};
  } else {
    j["complex_pair"] = nullptr;
  }
  j["tau_hat"] = r.tau_hat ? json(to_double(*r.tau_hat)) : json(nullptr);
  j["eta_hat"] = r.eta_hat ? json(*r.eta_hat) : json(nullptr);
  j["warnings"] = r.warnings;
  return j;
}

json manifest_base(const RunConfig& cfg, const std::string& command, const std::string& started) {
  json j;
  j["tool"] = "kohnlab";
  j["version"] = kToolVersion;
  j["command"] = command;
  json config;
  for (const auto& [key, value] : cfg.entries()) config[key] = value;
  j["config"] = config;
  j["started_utc"] = started;
  return j;
}

void finish_manifest(json& j, const std::filesystem::path& dir, int code) {
  j["finished_utc"] = utc_now();
  j["exit_code"] = code;
  write_json(dir / "manifest.json", j);
}

double single_k(const RunConfig& cfg, const char* command) {
  if (cfg.k.size() != 1) {
    throw ValidationError(std::string(command) + " takes exactly one k value (got " +
                          std::to_string(cfg.k.size()) + ")");
  }
  return cfg.k.front();
}

std::filesystem::path prepare_out(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + cfg.out + "'");
  return dir;
}

}  // namespace

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

KRow::KRow()
    : eta_oracle(kNaN),
      eta_median(kNaN),
      eta_anomaly_free(kNaN),
      eta_complex(kNaN),
      abs_d(kNaN),
      d_normalized(kNaN),
      lambda{kNaN, kNaN, kNaN},
      deficit(kNaN),
      gate_deviation(kNaN) {}

bool KRow::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

KRow compute_k_row(const RunConfig& cfg, const RadialGrid& grid, double k) {
  KRow row;
  row.k = k;
  const double c = cfg.basis.c;
  try {
    row.eta_oracle = oracle_phase_shift(cfg.potential, k, grid, {cfg.oracle_step, 0.0});
  } catch (const Error& e) {
    row.notes.push_back(std::string("oracle: ") + e.what());
  }

  ElementTable table;
  try {
    table = assemble_elements(cfg.potential, cfg.basis, k, grid, cfg.quadrature_gate);
    row.gate_deviation = table.gate_deviation;
  } catch (const Error& e) {
    row.error = e.what();
    row.flags.push_back("failed");
    return row;
  }

  const SingularityReport report = analyze(table, c);
  row.report = report;
  const Complex d = d_from_coeffs(report.coeffs);
  row.abs_d = to_double(Real(abs(d)));
  row.d_normalized =
      report.coeffs.scale > 0 ? to_double(Real(abs(d) / report.coeffs.scale)) : 0.0;
  if (report.roots.complex_pair && report.roots.complex_pair->im < 0.1) {
    row.flags.push_back("complex_root");
  }
  for (const std::string& w : report.warnings) row.notes.push_back(w);
  row.lambda = lambdas_at(table);

  std::vector<std::string> errors;
  try {
    const AnomalyMeasure m = anomaly_measure(table, tau_grid(cfg.p), c);
    row.eta_median = optimize_tau(report, &m, Scheme::MedianPhase).eta;
  } catch (const Error& e) {
    errors.push_back(std::string("median: ") + e.what());
  }
  try {
    row.eta_anomaly_free = optimize_tau(report, nullptr, Scheme::AnomalyFreeRoot).eta;
  } catch (const NoAnomalyFreeRoot& e) {
    row.notes.push_back(e.what());
  } catch (const Error& e) {
    errors.push_back(std::string("anomaly_free: ") + e.what());
  }
  try {
    const ComplexKohnSolution s = complex_phase_shift(assemble_complex(table, 0), table, c);
    row.eta_complex = s.eta;
    row.deficit = s.deficit;
  } catch (const Error& e) {
    errors.push_back(std::string("complex: ") + e.what());
  }
  if (report.degenerate) row.flags.push_back("degenerate");
  if (!errors.empty()) {
    row.error = join(errors, "; ");
    if (!report.degenerate) row.flags.push_back("failed");
  }
  return row;
}

void apply_sweep_flags(std::vector<KRow>& rows) {
  std::vector<double> ks;
  std::vector<QuadraticCoeffs> coeffs;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].report) {
      ks.push_back(rows[i].k);
      coeffs.push_back(rows[i].report->coeffs);
      where.push_back(i);
    }
  }
  const DTrace trace = scan_D(ks, coeffs);
  for (std::size_t j = 0; j < where.size(); ++j) {
    if (trace.flagged[j]) rows[where[j]].flags.push_back("small_D");
  }

  std::array<double, 3> median{};
  for (std::size_t a = 0; a < 3; ++a) {
    std::vector<double> vals;
    for (const KRow& r : rows) {
      if (std::isfinite(r.lambda[a])) vals.push_back(r.lambda[a]);
    }
    median[a] = vals.empty() ? kNaN : median_of(vals);
  }
  for (KRow& r : rows) {
    bool low = true;
    for (std::size_t a = 0; a < 3; ++a) {
      if (!(r.lambda[a] < kLowLambdaRel * median[a])) low = false;
    }
    if (low) r.flags.push_back("low_lambda");
  }
}

std::vector<KRow> sweep_k(const RunConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = cfg.grid();
  std::vector<KRow> rows = parallel_map(cfg.k.size(), cfg.threads, [&](std::size_t i) {
    return compute_k_row(cfg, grid, cfg.k[i]);
  });
  apply_sweep_flags(rows);
  return rows;
}

TauScan tau_scan(const RunConfig& cfg, double k) {
  cfg.validate();
  const RadialGrid grid = cfg.grid();
  const double c = cfg.basis.c;
  const ElementTable table =
      assemble_elements(cfg.potential, cfg.basis, k, grid, cfg.quadrature_gate);
  TauScan scan;
  scan.report = analyze(table, c);
  const std::vector<Real> taus = tau_grid(cfg.p);
  scan.rows = parallel_map(taus.size(), cfg.threads, [&](std::size_t i) {
    const Real& tau = taus[i];
    const RotatedSystem sys = rotate_table(table, tau);
    TauRow r{to_double(tau), kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
    r.det_a = to_double(determinant<Real>(sys.a));
    r.det_form = to_double(scan.report.coeffs.form(tau));
    try {
      r.eta_v = solve_at(table, tau, c, false).eta;
    } catch (const SingularMatrix&) {
    }
    try {
      r.cot_value = to_double(kohn_cotangent(table, tau, c));
    } catch (const DegenerateLimit&) {
    }
    const Conditioning cond = conditioning<Real>(sys.a);
    r.kappa = to_double(cond.kappa);
    r.lambda = to_double(cond.lambda);
    return r;
  });
  return scan;
}

std::vector<SurfacePoint> surface_ab(const RunConfig& cfg, double k) {
  cfg.validate();
  const RadialGrid grid = cfg.grid();
  const std::vector<double> alphas = cfg.alpha_range.values();
  const std::vector<double> betas = cfg.beta_range.values();
  const std::size_t nb = betas.size();
  std::vector<SurfacePoint> pts =
      parallel_map(alphas.size() * nb, cfg.threads, [&](std::size_t idx) {
        SurfacePoint pt{alphas[idx / nb], betas[idx % nb], kNaN, kNaN, ""};
        BasisSpec basis = cfg.basis;
        basis.alpha = pt.alpha;
        basis.beta = pt.beta;
        try {
          const ElementTable t =
              assemble_elements(cfg.potential, basis, k, grid, cfg.quadrature_gate);
          pt.eta_v = complex_phase_shift(assemble_complex(t, 0), t, basis.c).eta;
        } catch (const Error& e) {
          pt.error = e.what();
        }
        return pt;
      });
  // delta' = |eta_v - median over beta| at fixed alpha
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    std::vector<double> vals;
    for (std::size_t b = 0; b < nb; ++b) {
      const double e = pts[a * nb + b].eta_v;
      if (std::isfinite(e)) vals.push_back(e);
    }
    if (vals.empty()) continue;
    const double med = median_of(vals);
    for (std::size_t b = 0; b < nb; ++b) {
      SurfacePoint& p = pts[a * nb + b];
      if (std::isfinite(p.eta_v)) p.delta_prime = std::abs(phase_difference(p.eta_v, med));
    }
  }
  return pts;
}

std::vector<GammaRow> gamma_scan(const RunConfig& cfg, double k) {
  cfg.validate();
  const RadialGrid grid = cfg.grid();
  const std::vector<double> gammas = cfg.gamma_range.values();
  for (double g : gammas) validate_grid(grid, cfg.potential, g);
  return parallel_map(gammas.size(), cfg.threads, [&](std::size_t i) {
    GammaRow row{gammas[i], kNaN, kNaN, {kNaN, kNaN, kNaN}, ""};
    BasisSpec basis = cfg.basis;
    basis.gamma = row.gamma;
    try {
      const ElementTable t =
          assemble_elements(cfg.potential, basis, k, grid, cfg.quadrature_gate);
      row.abs_d = to_double(Real(abs(d_from_coeffs(extract_coeffs(t)))));
      row.lambda = lambdas_at(t);
      row.eta_v = complex_phase_shift(assemble_complex(t, 0), t, basis.c).eta;
    } catch (const Error& e) {
      row.error = e.what();
    }
    return row;
  });
}

std::vector<ComplexCheckRow> complex_check(const RunConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = cfg.grid();
  std::vector<QuadraticCoeffs> coeffs(cfg.k.size());
  std::vector<ComplexCheckRow> rows = parallel_map(cfg.k.size(), cfg.threads, [&](std::size_t i) {
    ComplexCheckRow row{cfg.k[i], kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, false, ""};
    try {
      const ElementTable t =
          assemble_elements(cfg.potential, cfg.basis, row.k, grid, cfg.quadrature_gate);
      coeffs[i] = extract_coeffs(t);
      const Complex d = d_from_coeffs(coeffs[i]);
      row.abs_d = to_double(Real(abs(d)));
      row.re_d = to_double(Real(d.real()));
      row.im_d = to_double(Real(d.imag()));
      std::vector<Real> mags;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      double worst = 0;
      for (const Real& tau : tau_grid(cfg.p)) {
        const ComplexKohnSolution s =
            complex_phase_shift(assemble_complex(t, tau), t, cfg.basis.c);
        if (tau == 0) {
          row.eta_complex = s.eta;
          row.d_identity_rel = to_double(Real(abs(s.d_const - d) / abs(d)));
        }
        lo = std::min(lo, s.eta);
        hi = std::max(hi, s.eta);
        worst = std::max(worst, s.deficit);
        mags.push_back(abs(s.det));
      }
      Real mean = 0;
      for (const Real& m : mags) mean += m;
      mean /= mags.size();
      Real var = 0;
      for (const Real& m : mags) var += (m - mean) * (m - mean);
      var /= mags.size();
      row.circle_rel_stdev = to_double(Real(sqrt(var) / mean));
      row.eta_spread = hi - lo;
      row.max_deficit = worst;
    } catch (const Error& e) {
      row.error = e.what();
    }
    return row;
  });
  std::vector<double> ks;
  std::vector<QuadraticCoeffs> good;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].error.empty()) {
      ks.push_back(rows[i].k);
      good.push_back(coeffs[i]);
      where.push_back(i);
    }
  }
  const DTrace trace = scan_D(ks, good);
  for (std::size_t j = 0; j < where.size(); ++j) rows[where[j]].flagged = trace.flagged[j];
  return rows;
}

namespace {

template <class Body>
int run_command(const RunConfig& cfg, const std::string& name, std::ostream& err, Body body) {
  const std::string started = utc_now();
  std::filesystem::path dir;
  try {
    cfg.validate();
    dir = prepare_out(cfg);
  } catch (const ValidationError& e) {
    err << "kohnlab " << name << ": " << e.what() << "\n";
    return 2;
  }
  json manifest = manifest_base(cfg, name, started);
  int code = 0;
  try {
    code = body(dir, manifest);
  } catch (const ValidationError& e) {
    err << "kohnlab " << name << ": " << e.what() << "\n";
    code = 2;
  } catch (const Error& e) {
    err << "kohnlab " << name << ": " << e.what() << "\n";
    code = 1;
  }
  finish_manifest(manifest, dir, code);
  return code;
}

}  // namespace

int cmd_sweep_k(const RunConfig& cfg, std::ostream& err) {
  return run_command(cfg, "sweep-k", err, [&](const std::filesystem::path& dir, json& manifest) {
    const std::vector<KRow> rows = sweep_k(cfg);
    std::vector<std::vector<std::string>> table;
    json summary = json::array();
    int code = 0;
    for (const KRow& r : rows) {
      table.push_back({csv_number(r.k), csv_number(r.eta_oracle), csv_number(r.eta_median),
                       csv_number(r.eta_anomaly_free), csv_number(r.eta_complex),
                       csv_number(r.abs_d), csv_number(r.lambda[0]), csv_number(r.lambda[1]),
                       csv_number(r.lambda[2]), join(r.flags, ";")});
      json s{{"k", r.k},
             {"eta_oracle", number_or_null(r.eta_oracle)},
             {"eta_median", number_or_null(r.eta_median)},
             {"eta_anomaly_free", number_or_null(r.eta_anomaly_free)},
             {"eta_complex", number_or_null(r.eta_complex)},
             {"abs_D", number_or_null(r.abs_d)},
             {"D_normalized", number_or_null(r.d_normalized)},
             {"unitarity_deficit", number_or_null(r.deficit)},
             {"quadrature_gate_deviation", number_or_null(r.gate_deviation)},
             {"flags", r.flags},
             {"notes", r.notes},
             {"error", r.error.empty() ? json(nullptr) : json(r.error)}};
      s["singularity"] = r.report ? report_json(*r.report) : json(nullptr);
      summary.push_back(s);
      if (!r.error.empty()) {
        err << "kohnlab sweep-k: k = " << csv_number(r.k) << ": " << r.error << "\n";
        code = 1;
      }
    }
    write_csv(dir / "phase_vs_k.csv",
              {"k", "eta_oracle", "eta_median", "eta_anomaly_free", "eta_complex", "abs_D",
               "lambda_tau0", "lambda_tau_pi4", "lambda_tau_pi2", "flags"},
              table);
    manifest["rows"] = summary;
    return code;
  });
}

int cmd_tau_scan(const RunConfig& cfg, std::ostream& err) {
  return run_command(cfg, "tau-scan", err, [&](const std::filesystem::path& dir, json& manifest) {
    const double k = single_k(cfg, "tau-scan");
    const TauScan scan = tau_scan(cfg, k);
    std::vector<std::vector<std::string>> table;
    for (const TauRow& r : scan.rows) {
      table.push_back({csv_number(r.tau), csv_number(r.eta_v), csv_number(r.det_a),
                       csv_number(r.det_form), csv_number(r.cot_value), csv_number(r.kappa),
                       csv_number(r.lambda)});
    }
    write_csv(dir / "tau_scan.csv",
              {"tau", "eta_v", "det_A", "det_form", "cot_value", "kappa", "lambda"}, table);
    const json report = report_json(scan.report);
    write_json(dir / "roots.json", report);
    manifest["rows"] = json::array({report});
    if (scan.report.degenerate) {
      err << "kohnlab tau-scan: determinant form is degenerate at k = " << csv_number(k) << "\n";
      return 1;
    }
    return 0;
  });
}

int cmd_surface_ab(const RunConfig& cfg, std::ostream& err) {
  return run_command(cfg, "surface-ab", err, [&](const std::filesystem::path& dir, json& manifest) {
    const double k = single_k(cfg, "surface-ab");
    const std::vector<SurfacePoint> pts = surface_ab(cfg, k);
    std::vector<std::vector<std::string>> table;
    json failures = json::array();
    for (const SurfacePoint& p : pts) {
      table.push_back({csv_number(p.alpha), csv_number(p.beta), csv_number(p.eta_v),
                       csv_number(p.delta_prime)});
      if (!p.error.empty()) {
        failures.push_back({{"alpha", p.alpha}, {"beta", p.beta}, {"error", p.error}});
        err << "kohnlab surface-ab: alpha = " << csv_number(p.alpha)
            << ", beta = " << csv_number(p.beta) << ": " << p.error << "\n";
      }
    }
    write_csv(dir / "surface_ab.csv", {"alpha", "beta", "eta_v", "delta_prime"}, table);
    manifest["points"] = pts.size();
    manifest["failures"] = failures;
    return failures.empty() ? 0 : 1;
  });
}

int cmd_gamma_scan(const RunConfig& cfg, std::ostream& err) {
  return run_command(cfg, "gamma-scan", err, [&](const std::filesystem::path& dir, json& manifest) {
    const double k = single_k(cfg, "gamma-scan");
    const std::vector<GammaRow> rows = gamma_scan(cfg, k);
    std::vector<std::vector<std::string>> table;
    json failures = json::array();
    for (const GammaRow& r : rows) {
      table.push_back({csv_number(r.gamma), csv_number(r.eta_v), csv_number(r.abs_d),
                       csv_number(r.lambda[0]), csv_number(r.lambda[1]), csv_number(r.lambda[2])});
      if (!r.error.empty()) {
        failures.push_back({{"gamma", r.gamma}, {"error", r.error}});
        err << "kohnlab gamma-scan: gamma = " << csv_number(r.gamma) << ": " << r.error << "\n";
      }
    }
    write_csv(dir / "gamma_scan.csv",
              {"gamma", "eta_v", "abs_D", "lambda_tau0", "lambda_tau_pi4", "lambda_tau_pi2"},
              table);
    manifest["failures"] = failures;
    return failures.empty() ? 0 : 1;
  });
}

int cmd_complex_check(const RunConfig& cfg, std::ostream& err) {
  return run_command(cfg, "complex-check", err,
                     [&](const std::filesystem::path& dir, json& manifest) {
    const std::vector<ComplexCheckRow> rows = complex_check(cfg);
    std::vector<std::vector<std::string>> table;
    json summary = json::array();
    int code = 0;
    for (const ComplexCheckRow& r : rows) {
      table.push_back({csv_number(r.k), csv_number(r.eta_complex), csv_number(r.eta_spread),
                       csv_number(r.circle_rel_stdev), csv_number(r.d_identity_rel),
                       csv_number(r.max_deficit), csv_number(r.abs_d), csv_number(r.re_d),
                       csv_number(r.im_d), r.flagged ? "small_D" : ""});
      summary.push_back({{"k", r.k},
                         {"eta_complex", number_or_null(r.eta_complex)},
                         {"flagged", r.flagged},
                         {"error", r.error.empty() ? json(nullptr) : json(r.error)}});
      if (!r.error.empty()) {
        err << "kohnlab complex-check: k = " << csv_number(r.k) << ": " << r.error << "\n";
        code = 1;
      }
    }
    write_csv(dir / "complex_check.csv",
              {"k", "eta_complex", "eta_spread", "circle_rel_stdev", "d_identity_rel",
               "max_deficit", "abs_D", "re_D", "im_D", "flags"},
              table);
    manifest["rows"] = summary;
    return code;
  });
}

}  // namespace kohnlab
