#include "kohnlab/errors.hpp"
#include "kohnlab/sweep.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kohnlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "kohnlab_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
  }
  double num(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(col(name)));
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Csv read_csv(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  Csv csv;
  std::string line;
  REQUIRE(std::getline(in, line));
  csv.header = split(line);
  while (std::getline(in, line)) csv.rows.push_back(split(line));
  return csv;
}

int significant_digits(const std::string& cell) {
  int n = 0;
  bool leading = true;
  for (char ch : cell) {
    if (ch == 'e' || ch == 'E') break;
    if (ch < '0' || ch > '9') continue;
    if (leading && ch == '0') continue;
    leading = false;
    ++n;
  }
  return n;
}

RunConfig small_config(const fs::path& out) {
  RunConfig cfg;
  cfg.p = 101;
  cfg.out = out.string();
  cfg.threads = 2;
  return cfg;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + KOHNLAB_CLI + "\" " + args + " > \"" + log.string() +
                          "\" 2>&1";
  const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

}  // namespace

TEST_SUITE("sweep_cli") {
  TEST_CASE("config text parsing") {
    const RunConfig cfg = parse_config_text(
        "# comment\n"
        "potential = square_well\n"
        "strength = -0.5\n"
        "range = 2.5   # trailing\n"
        "\n"
        "k = 0.1,0.2,0.3\n"
        "p = 51\n"
        "alpha_range = 0.5:0.6:3\n");
    CHECK(cfg.potential.kind == PotentialKind::SquareWell);
    CHECK(cfg.potential.strength == -0.5);
    CHECK(cfg.potential.range == 2.5);
    CHECK(cfg.k == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(cfg.p == 51);
    CHECK(cfg.alpha_range.count == 3);
    CHECK(cfg.alpha_range.values()[1] == doctest::Approx(0.55));
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config_text("bogus = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("p = 11\np = 13\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("p = eleven\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("gamma = 1.0x\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("just words\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("potential = coulomb\n"), ValidationError);
    try {
      parse_config_text("k = 0.2\nk = 0.3\n", "run.cfg");
      FAIL("repeated key accepted");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("run.cfg:2") != std::string::npos);
    }
    try {
      parse_config_text("\nfoo = 1\n", "x.cfg");
      FAIL("unknown key accepted");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("x.cfg:2") != std::string::npos);
      CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
  }

  TEST_CASE("ranges and k lists") {
    const Range r = Range::parse("0.1:0.5:5");
    REQUIRE(r.values().size() == 5);
    CHECK(r.values().front() == 0.1);
    CHECK(r.values().back() == 0.5);
    CHECK(Range::parse(r.str()).values() == r.values());
    CHECK(Range::parse("0.3:0.3:1").values() == std::vector<double>{0.3});
    CHECK_THROWS_AS(Range::parse("0.1:0.5"), ValidationError);
    CHECK_THROWS_AS(Range::parse("0.1:0.5:0"), ValidationError);
    CHECK_THROWS_AS(Range::parse("a:b:3"), ValidationError);

    CHECK(parse_k_list("0.2") == std::vector<double>{0.2});
    CHECK(parse_k_list("0.2,0.4") == std::vector<double>{0.2, 0.4});
    CHECK(parse_k_list("0.1:0.3:3").size() == 3);
    CHECK_THROWS_AS(parse_k_list(""), ValidationError);
    CHECK_THROWS_AS(parse_k_list("0.2,,0.4"), ValidationError);
  }

  TEST_CASE("entries round-trip through the parser") {
    RunConfig cfg;
    cfg.k = {0.15, 0.35};
    cfg.basis.gamma = 0.7;
    cfg.p = 77;
    cfg.scheme = Scheme::MedianPhase;
    std::string text;
    for (const auto& [key, value] : cfg.entries()) text += key + " = " + value + "\n";
    const RunConfig back = parse_config_text(text);
    CHECK(back.entries() == cfg.entries());
  }

  TEST_CASE("validation failure writes nothing") {
    const fs::path dir = scratch("invalid") / "out";
    RunConfig cfg = small_config(dir);
    cfg.p = 2;
    std::ostringstream err;
    CHECK(cmd_sweep_k(cfg, err) == 2);
    CHECK(!err.str().empty());
    CHECK(!fs::exists(dir / "phase_vs_k.csv"));
    CHECK(!fs::exists(dir / "manifest.json"));

    RunConfig two = small_config(dir);
    two.k = {0.2, 0.3};
    std::ostringstream err2;
    CHECK(cmd_tau_scan(two, err2) == 2);
    CHECK(err2.str().find("exactly one k") != std::string::npos);
  }

  TEST_CASE("sweep-k on the zero potential") {
    const fs::path dir = scratch("zero_sweep");
    RunConfig cfg = small_config(dir);
    cfg.potential.kind = PotentialKind::Zero;
    cfg.potential.strength = 0;
    cfg.k = {0.1, 0.3, 0.5, 0.7, 0.9};
    std::ostringstream err;
    REQUIRE(cmd_sweep_k(cfg, err) == 0);
    const Csv csv = read_csv(dir / "phase_vs_k.csv");
    REQUIRE(csv.rows.size() == 5);
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
      CAPTURE(i);
      for (const char* c : {"eta_oracle", "eta_median", "eta_anomaly_free", "eta_complex"})
        CHECK(std::abs(csv.num(i, c)) <= 1e-8);
      CHECK(csv.rows[i][csv.col("flags")].empty());
    }
  }

  TEST_CASE("sweep-k output is reproducible and precise") {
    const fs::path a = scratch("repeat_a");
    const fs::path b = scratch("repeat_b");
    RunConfig cfg = small_config(a);
    cfg.k = {0.2, 0.45, 0.8};
    std::ostringstream err;
    REQUIRE(cmd_sweep_k(cfg, err) == 0);
    cfg.out = b.string();
    cfg.threads = 1;
    REQUIRE(cmd_sweep_k(cfg, err) == 0);
    CHECK(slurp(a / "phase_vs_k.csv") == slurp(b / "phase_vs_k.csv"));

    const Csv csv = read_csv(a / "phase_vs_k.csv");
    CHECK(csv.header.front() == "k");
    for (const auto& row : csv.rows)
      for (const char* c : {"eta_oracle", "eta_median", "eta_complex", "abs_D"}) {
        const std::string& cell = row[csv.col(c)];
        CAPTURE(cell);
        CHECK(significant_digits(cell) >= 15);
      }

    const nlohmann::json m = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(m["command"] == "sweep-k");
    CHECK(m["exit_code"] == 0);
    std::string text;
    for (const auto& [key, value] : m["config"].items())
      text += key + " = " + value.get<std::string>() + "\n";
    RunConfig expect = cfg;
    expect.out = a.string();
    expect.threads = 2;
    CHECK(parse_config_text(text).entries() == expect.entries());
  }

  TEST_CASE("tau-scan determinant columns agree") {
    const fs::path dir = scratch("tau_scan");
    RunConfig cfg = small_config(dir);
    cfg.k = {0.3};
    std::ostringstream err;
    REQUIRE(cmd_tau_scan(cfg, err) == 0);
    const Csv csv = read_csv(dir / "tau_scan.csv");
    REQUIRE(csv.rows.size() == 101);
    double peak = 0;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) peak = std::max(peak, std::abs(csv.num(i, "det_A")));
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
      CHECK(std::abs(csv.num(i, "det_A") - csv.num(i, "det_form")) <= 1e-9 * peak);
    REQUIRE(fs::exists(dir / "roots.json"));
    const nlohmann::json roots = nlohmann::json::parse(slurp(dir / "roots.json"));
    CHECK(roots.contains("coeffs"));
  }

  TEST_CASE("gamma-scan") {
    SUBCASE("zero potential does not depend on gamma") {
      const fs::path dir = scratch("gamma_zero");
      RunConfig cfg = small_config(dir);
      cfg.potential.kind = PotentialKind::Zero;
      cfg.potential.strength = 0;
      cfg.k = {0.4};
      cfg.gamma_range = Range{0.5, 1.0, 6};
      std::ostringstream err;
      REQUIRE(cmd_gamma_scan(cfg, err) == 0);
      const Csv csv = read_csv(dir / "gamma_scan.csv");
      REQUIRE(csv.rows.size() == 6);
      for (std::size_t i = 0; i < csv.rows.size(); ++i) CHECK(std::abs(csv.num(i, "eta_v")) <= 1e-8);
    }
    SUBCASE("default potential is stable across gamma") {
      const fs::path dir = scratch("gamma_default");
      RunConfig cfg = small_config(dir);
      cfg.k = {0.4};
      cfg.gamma_range = Range{0.5, 1.0, 6};
      std::ostringstream err;
      REQUIRE(cmd_gamma_scan(cfg, err) == 0);
      const Csv csv = read_csv(dir / "gamma_scan.csv");
      double lo = 1e9, hi = -1e9;
      for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        lo = std::min(lo, csv.num(i, "eta_v"));
        hi = std::max(hi, csv.num(i, "eta_v"));
      }
      CHECK(hi - lo <= 1e-3);
    }
  }

  TEST_CASE("surface-ab") {
    const fs::path dir = scratch("surface");
    RunConfig cfg = small_config(dir);
    cfg.potential.kind = PotentialKind::Zero;
    cfg.potential.strength = 0;
    cfg.k = {0.3};
    cfg.alpha_range = Range{0.5, 0.6, 2};
    cfg.beta_range = Range{0.8, 1.2, 3};
    std::ostringstream err;
    REQUIRE(cmd_surface_ab(cfg, err) == 0);
    const Csv csv = read_csv(dir / "surface_ab.csv");
    REQUIRE(csv.rows.size() == 6);
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
      CHECK(std::abs(csv.num(i, "eta_v")) <= 1e-8);
      CHECK(csv.num(i, "delta_prime") <= 1e-8);
    }
  }

  TEST_CASE("complex-check") {
    const fs::path dir = scratch("complex_check");
    RunConfig cfg = small_config(dir);
    cfg.k = {0.2, 0.6};
    std::ostringstream err;
    REQUIRE(cmd_complex_check(cfg, err) == 0);
    const Csv csv = read_csv(dir / "complex_check.csv");
    REQUIRE(csv.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(csv.num(i, "eta_spread") <= 1e-8);
      CHECK(csv.num(i, "circle_rel_stdev") <= 1e-9);
      CHECK(csv.num(i, "d_identity_rel") <= 1e-9);
    }
  }

  TEST_CASE("command-line binary") {
    const fs::path dir = scratch("cli");
    const fs::path cfg_path = dir / "run.cfg";
    {
      std::ofstream f(cfg_path);
      f << "k = 0.25\np = 41\nthreads = 2\n";
    }
    const fs::path out = dir / "out";
    CHECK(run_cli("tau-scan --config \"" + cfg_path.string() + "\" --out \"" + out.string() + "\"",
                  dir / "log1") == 0);
    CHECK(fs::exists(out / "tau_scan.csv"));
    CHECK(read_csv(out / "tau_scan.csv").rows.size() == 41);
    const nlohmann::json m = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(m["command"] == "tau-scan");
    CHECK(m["config"]["out"] == out.string());

    // overrides win over the file
    const fs::path out2 = dir / "out2";
    CHECK(run_cli("tau-scan --config \"" + cfg_path.string() + "\" --p 21 --k 0.4 --gamma 0.8 --out \"" +
                      out2.string() + "\"",
                  dir / "log2") == 0);
    CHECK(read_csv(out2 / "tau_scan.csv").rows.size() == 21);
    const nlohmann::json m2 = nlohmann::json::parse(slurp(out2 / "manifest.json"));
    CHECK(m2["config"]["k"] == "0.4");
    CHECK(m2["config"]["gamma"] == "0.8");

    const fs::path bad = dir / "bad.cfg";
    {
      std::ofstream f(bad);
      f << "k = 0.25\nwibble = 3\n";
    }
    CHECK(run_cli("sweep-k --config \"" + bad.string() + "\" --out \"" + (dir / "out3").string() + "\"",
                  dir / "log3") == 2);
    CHECK(slurp(dir / "log3").find("wibble") != std::string::npos);
    CHECK(!fs::exists(dir / "out3" / "manifest.json"));
    CHECK(run_cli("tau-scan --p 1 --out \"" + (dir / "out4").string() + "\"", dir / "log4") == 2);
    CHECK(run_cli("no-such-command", dir / "log5") != 0);
  }
}
