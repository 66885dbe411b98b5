#include "fixtures.hpp"
#include "kohnlab/model_potential.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace kohnlab;

namespace {

// Closed-form square-well phase shift, written out independently of the
// integrator.
double square_well_eta(double v0, double r0, double k) {
  const double kk = std::sqrt(k * k + 2 * std::abs(v0));
  const double tk = std::tan(kk * r0);
  const double tk0 = std::tan(k * r0);
  return std::atan((k * tk - kk * tk0) / (kk + k * tk0 * tk));
}

}  // namespace

TEST_SUITE("model_potential") {
  TEST_CASE("evaluate_potential examples") {
    CHECK(evaluate_potential(PotentialSpec::zero(), 3.7) == 0.0);
    CHECK(evaluate_potential(PotentialSpec::exponential(-3, 1), 0.0) == doctest::Approx(-3.0));
    CHECK(evaluate_potential(PotentialSpec::exponential(-3, 1), 1.0) ==
          doctest::Approx(-3.0 / std::exp(1.0)).epsilon(1e-15));
    CHECK(evaluate_potential(PotentialSpec::square_well(-1, 2), 1.999) == -1.0);
    CHECK(evaluate_potential(PotentialSpec::square_well(-1, 2), 2.0) == 0.0);
  }

  TEST_CASE("spec validation and kind names") {
    CHECK_THROWS_AS(PotentialSpec::exponential(-3, 0).validate(), ValidationError);
    CHECK_THROWS_AS(PotentialSpec::square_well(-3, -1).validate(), ValidationError);
    CHECK_NOTHROW(PotentialSpec{PotentialKind::Zero, 0.0, -5.0}.validate());
    CHECK(parse_potential_kind("square_well") == PotentialKind::SquareWell);
    CHECK(to_string(PotentialKind::Exponential) == "exponential");
    CHECK_THROWS_AS(parse_potential_kind("coulomb"), ValidationError);
    CHECK(PotentialSpec::square_well(-1, 1.5).breakpoints() == std::vector<double>{1.5});
  }

  TEST_CASE("radial grid invariants") {
    const RadialGrid g = RadialGrid::build(100, 24, 2, {1.3});
    REQUIRE(g.size() > 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(g.nodes()[i] > 0);
      CHECK(g.nodes()[i] <= 100);
      CHECK(g.weights()[i] > 0);
      if (i > 0) CHECK(g.nodes()[i] > g.nodes()[i - 1]);
    }
    Real total = 0;
    for (const Real& w : g.weights()) total += w;
    CHECK(to_double(abs(total - 100)) < 1e-28);
    CHECK(g.refined().order() == 48);
    CHECK(g.refined().size() == 2 * g.size());

    CHECK_NOTHROW(validate_grid(g, PotentialSpec::exponential(-3, 1), 0.75));
    CHECK_THROWS_AS(validate_grid(RadialGrid::build(20), PotentialSpec::exponential(-3, 1), 0.75),
                    ValidationError);
    CHECK_THROWS_AS(validate_grid(g, PotentialSpec::zero(), 0.1), ValidationError);
    CHECK_THROWS_AS(RadialGrid::build(0), ValidationError);
  }

  TEST_CASE("gauss-legendre rule integrates polynomials exactly") {
    const GaussRule rule = gauss_legendre(10);
    for (int deg = 0; deg <= 19; ++deg) {
      Real sum = 0;
      for (int i = 0; i < 10; ++i) sum += rule.weights[i] * pow(rule.nodes[i], deg);
      const Real exact = deg % 2 ? Real(0) : Real(2) / (deg + 1);
      CHECK(to_double(abs(sum - exact)) < 1e-30);
    }
  }

  TEST_CASE("zero potential gives zero phase across k") {
    const RadialGrid& grid = fixtures::default_grid();
    for (double k : {0.01, 0.05, 0.2, 0.5, 0.77, 1.0}) {
      CHECK(std::abs(oracle_phase_shift(PotentialSpec::zero(), k, grid)) <= 1e-10);
    }
  }

  TEST_CASE("exponential golden value at k = 0.2") {
    // Frozen from this integrator at h = 1e-4 after the step-halving check
    // below; an independent adaptive DOP853 run gives 0.07686738846908.
    const double eta = oracle_phase_shift(fixtures::default_potential(), 0.2,
                                          fixtures::default_grid());
    CHECK(eta == doctest::Approx(0.07686738846966623).epsilon(1e-12));
    CHECK(std::abs(eta - 0.07686738846908403) < 1e-9);
    OracleOptions half;
    half.step = 5e-5;
    CHECK(std::abs(eta - oracle_phase_shift(fixtures::default_potential(), 0.2,
                                            fixtures::default_grid(), half)) < 1e-8);
  }

  TEST_CASE("square well matches the closed form") {
    const RadialGrid& grid = fixtures::default_grid();
    CHECK(std::abs(phase_difference(oracle_phase_shift(PotentialSpec::square_well(-1, 1), 0.3, grid),
                                    square_well_eta(-1, 1, 0.3))) <= 1e-8);
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> v(-2.5, -0.1), r(0.5, 3.0), kk(0.05, 1.0);
    for (int i = 0; i < 20; ++i) {
      const double v0 = v(rng), r0 = r(rng), k = kk(rng);
      const double eta = oracle_phase_shift(PotentialSpec::square_well(v0, r0), k, grid);
      CAPTURE(v0);
      CAPTURE(r0);
      CAPTURE(k);
      CHECK(std::abs(phase_difference(eta, square_well_eta(v0, r0, k))) <= 1e-8);
    }
  }

  TEST_CASE("fourth-order step-halving convergence") {
    const auto pot = fixtures::default_potential();
    std::vector<double> eta;
    for (double h : {0.04, 0.02, 0.01, 0.005}) {
      OracleOptions o;
      o.step = h;
      o.separation = 7.5;  // fixed, on every lattice
      eta.push_back(oracle_phase_shift(pot, 0.2, 40.0, o));
    }
    const double d1 = std::abs(eta[0] - eta[1]);
    const double d2 = std::abs(eta[1] - eta[2]);
    const double d3 = std::abs(eta[2] - eta[3]);
    CHECK(d1 / d2 >= 8);
    CHECK(d2 / d3 >= 8);
  }

  TEST_CASE("degenerate two-point match raises NonConvergence") {
    OracleOptions o;
    o.separation = std::numbers::pi / 0.5;
    CHECK_THROWS_AS(oracle_phase_shift(fixtures::default_potential(), 0.5, 50.0, o),
                    NonConvergence);
    CHECK_THROWS_AS(oracle_phase_shift(fixtures::default_potential(), -0.1, 50.0), ValidationError);
  }

  TEST_CASE("phase wrapping convention") {
    const double pi = std::numbers::pi;
    CHECK(wrap_phase(-pi / 2) == doctest::Approx(pi / 2));
    CHECK(wrap_phase(pi / 2) == doctest::Approx(pi / 2));
    CHECK(wrap_phase(pi + 0.25) == doctest::Approx(0.25));
    CHECK(wrap_phase(-3 * pi - 0.1) == doctest::Approx(-0.1));
    CHECK(wrap_tau(-0.1) == doctest::Approx(pi - 0.1));
    CHECK(wrap_tau(pi) == doctest::Approx(0.0));
  }
}
