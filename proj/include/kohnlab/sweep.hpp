#pragma once

// Sweep drivers behind the command-line subcommands. Each command validates
// its configuration, evaluates points concurrently, collects them in input
// order and writes CSV tables plus manifest.json into cfg.out.

#include "kohnlab/complex_kohn.hpp"
#include "kohnlab/run_config.hpp"
#include "kohnlab/singularity_lab.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace kohnlab {

inline constexpr const char* kToolVersion = "0.1.0";

/// fn(0) .. fn(n-1) on up to `threads` workers (0 = hardware concurrency),
/// results in index order. fn must not throw.
template <class F>
auto parallel_map(std::size_t n, int threads, F fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) slots[i].emplace(fn(i));
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// One momentum of a sweep-k run. NaN marks a value that could not be formed.
struct KRow {
  double k = 0;
  double eta_oracle;
  double eta_median;
  double eta_anomaly_free;
  double eta_complex;
  double abs_d;
  double d_normalized;
  std::array<double, 3> lambda;  // tau = 0, pi/4, pi/2
  double deficit;
  double gate_deviation;
  std::optional<SingularityReport> report;
  std::vector<std::string> flags;  // complex_root, small_D, low_lambda, degenerate, failed
  std::vector<std::string> notes;
  std::string error;

  KRow();
  bool flagged() const { return !flags.empty(); }
  bool has_flag(const std::string& f) const;
};

/// Everything for one k except the sweep-relative flags.
KRow compute_k_row(const RunConfig& cfg, const RadialGrid& grid, double k);

/// small_D from scan_D over the sweep and low_lambda when Lambda at all of
/// tau = 0, pi/4, pi/2 is below 1e-3 of the sweep median at that tau.
void apply_sweep_flags(std::vector<KRow>& rows);

/// compute_k_row over cfg.k followed by apply_sweep_flags.
std::vector<KRow> sweep_k(const RunConfig& cfg);

struct TauRow {
  double tau;
  double eta_v;
  double det_a;
  double det_form;
  double cot_value;
  double kappa;
  double lambda;
};

struct TauScan {
  SingularityReport report;
  std::vector<TauRow> rows;
};

TauScan tau_scan(const RunConfig& cfg, double k);

struct SurfacePoint {
  double alpha;
  double beta;
  double eta_v;  // complex Kohn at tau = 0
  double delta_prime;
  std::string error;
};

std::vector<SurfacePoint> surface_ab(const RunConfig& cfg, double k);

struct GammaRow {
  double gamma;
  double eta_v;  // complex Kohn at tau = 0
  double abs_d;
  std::array<double, 3> lambda;
  std::string error;
};

std::vector<GammaRow> gamma_scan(const RunConfig& cfg, double k);

struct ComplexCheckRow {
  double k;
  double eta_complex;       // tau = 0
  double eta_spread;        // max - min over the tau grid
  double circle_rel_stdev;  // stdev / mean of |det A'(tau)|
  double d_identity_rel;    // |D(det A'(0)) - ((A - C) - iB)| / |D|
  double max_deficit;
  double abs_d;
  double re_d;
  double im_d;
  bool flagged = false;
  std::string error;
};

std::vector<ComplexCheckRow> complex_check(const RunConfig& cfg);

/// Command entry points: 0 on success, 1 when any point failed, 2 on a
/// validation error. A diagnostic line goes to `err` for every failure.
int cmd_sweep_k(const RunConfig& cfg, std::ostream& err);
int cmd_tau_scan(const RunConfig& cfg, std::ostream& err);
int cmd_surface_ab(const RunConfig& cfg, std::ostream& err);
int cmd_gamma_scan(const RunConfig& cfg, std::ostream& err);
int cmd_complex_check(const RunConfig& cfg, std::ostream& err);

/// Fixed-format decimal with 17 significant digits; "nan" for NaN.
std::string csv_number(double x);

}  // namespace kohnlab
