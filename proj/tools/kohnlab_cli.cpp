// kohnlab: generalized Kohn sweeps over k, tau, (alpha, beta) and gamma.

#include "kohnlab/errors.hpp"
#include "kohnlab/run_config.hpp"
#include "kohnlab/sweep.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

struct Overrides {
  std::string k;
  std::string p;
  std::string alpha;
  std::string beta;
  std::string gamma;
  std::string out;
};

// "x" sets the basis value, "lo:hi:count" sets the scan range.
void apply_scalar_or_range(kohnlab::RunConfig& cfg, const std::string& name,
                           const std::string& text) {
  if (text.empty()) return;
  if (text.find(':') != std::string::npos) {
    kohnlab::apply_entry(cfg, name + "_range", text);
  } else {
    kohnlab::apply_entry(cfg, name, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Kohn variational laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const kohnlab::RunConfig&, std::ostream&);
  };
  const Command commands[] = {
      {"sweep-k", "phase shifts over k: phase_vs_k.csv", kohnlab::cmd_sweep_k},
      {"tau-scan", "eta_v, det and conditioning over tau at one k: tau_scan.csv, roots.json",
       kohnlab::cmd_tau_scan},
      {"surface-ab", "complex Kohn eta_v over (alpha, beta) at one k: surface_ab.csv",
       kohnlab::cmd_surface_ab},
      {"gamma-scan", "complex Kohn eta_v over gamma at one k: gamma_scan.csv",
       kohnlab::cmd_gamma_scan},
      {"complex-check", "determinant circle and tau independence: complex_check.csv",
       kohnlab::cmd_complex_check},
  };
  std::vector<CLI::App*> subs;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "flat key = value run configuration");
    sub->add_option("--k", ov.k, "k list: v1,v2,... or lo:hi:count");
    sub->add_option("--p", ov.p, "tau grid size");
    sub->add_option("--alpha", ov.alpha, "alpha value, or lo:hi:count for surface-ab");
    sub->add_option("--beta", ov.beta, "beta value, or lo:hi:count for surface-ab");
    sub->add_option("--gamma", ov.gamma, "gamma value, or lo:hi:count for gamma-scan");
    sub->add_option("--out", ov.out, "output directory");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  kohnlab::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = kohnlab::load_config(config_path);
    if (!ov.k.empty()) kohnlab::apply_entry(cfg, "k", ov.k);
    if (!ov.p.empty()) kohnlab::apply_entry(cfg, "p", ov.p);
    apply_scalar_or_range(cfg, "alpha", ov.alpha);
    apply_scalar_or_range(cfg, "beta", ov.beta);
    apply_scalar_or_range(cfg, "gamma", ov.gamma);
    if (!ov.out.empty()) kohnlab::apply_entry(cfg, "out", ov.out);
  } catch (const kohnlab::ValidationError& e) {
    std::cerr << "kohnlab: " << e.what() << "\n";
    return 2;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) return commands[i].run(cfg, std::cerr);
  }
  return 2;
}
