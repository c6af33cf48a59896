#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "pairspec/config.hpp"
#include "pairspec/density.hpp"
#include "pairspec/errors.hpp"
#include "pairspec/runner.hpp"

using namespace pairspec;

// closed forms for the canonical density psi(mu) = (mu-1) e^{-(mu-1)}, e0 = 1
constexpr double kMomInverse = 0.4036526376768059;    // 1 - e E1(1)
constexpr double kMomInvSq = 0.1926947246463881;      // int psi / mu^2
constexpr double kMomShale = 0.6386713831117774;      // 1 - e^2 E1(2)

TEST_CASE("canonical density moments match closed forms") {
  auto d = canon_density();
  CHECK(d.e0() == 1.0);
  CHECK(d.label() == "canon");

  auto one = moment(d, Weight::one);
  auto gap = moment(d, Weight::inv_gap);
  auto lin = moment(d, Weight::linear);
  auto inv = moment(d, Weight::inverse);
  auto shale = moment(d, Weight::shale_pair);

  CHECK(one.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gap.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lin.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(inv.value == doctest::Approx(kMomInverse).epsilon(1e-11));
  CHECK(shale.value == doctest::Approx(kMomShale).epsilon(1e-11));

  for (const auto& m : {one, gap, lin, inv, shale}) {
    CHECK(m.abs_err >= 0.0);
    CHECK(m.abs_err < 1e-7);
  }
}

TEST_CASE("analytic derivative agrees with finite differences") {
  auto d = canon_density();
  CHECK(d.has_analytic_prime());
  SpectralDensity fd(
      [](double mu) {
        const double t = mu - 1.0;
        return t <= 0.0 ? 0.0 : t * std::exp(-t);
      },
      1.0, "canon_fd");
  CHECK(!fd.has_analytic_prime());

  for (double mu : {1.2, 2.0, 3.7, 5.0, 10.0}) {
    const double exact = d.psi_prime(mu);
    CHECK(fd.psi_prime(mu) == doctest::Approx(exact).epsilon(1e-6));
  }

  // clamping below the edge
  CHECK(d.psi(0.5) == 0.0);
  CHECK(d.psi(1.0) == 0.0);

  // phi(u) = psi(sqrt u) and its chain rule
  const double u = 4.0;
  CHECK(d.phi(u) == d.psi(2.0));
  CHECK(d.phi(0.5) == 0.0);
  const double h = 1e-6;
  const double fd_phi = (d.phi(u + h) - d.phi(u - h)) / (2 * h);
  CHECK(d.phi_prime(u) == doctest::Approx(fd_phi).epsilon(1e-6));
}

TEST_CASE("inv_sq_shift moment needs beta inside the gap") {
  auto d = canon_density();
  CHECK_THROWS_AS(moment(d, Weight::inv_sq_shift, 0.0), InputError);
  CHECK_THROWS_AS(moment(d, Weight::inv_sq_shift, 1.0), InputError);
  CHECK_THROWS_AS(moment(d, Weight::inv_sq_shift, -0.3), InputError);
  CHECK_THROWS_AS(moment(d, Weight::inv_sq_shift, 1.5), InputError);

  auto lo = moment(d, Weight::inv_sq_shift, 0.5);
  auto hi = moment(d, Weight::inv_sq_shift, 0.9);
  CHECK(lo.value > 0.0);
  CHECK(hi.value > lo.value);  // kernel grows as beta approaches the edge
}

TEST_CASE("edge-divergent density is rejected with a divergence error") {
  SpectralDensity bad(
      [](double mu) { return mu <= 1.0 ? 0.0 : mu * std::exp(-(mu * mu - 1.0)); },
      1.0, "edge_flat");
  CHECK(moment(bad, Weight::one).value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(moment(bad, Weight::inv_gap), DivergenceError);
}

TEST_CASE("validator accepts the canonical density except the edge slope limit") {
  auto rep = validate_assumptions(canon_density());
  CHECK(rep.density_label == "canon");
  CHECK(rep.e0 == 1.0);
  CHECK(!rep.all_pass());

  std::vector<std::string> failing;
  for (const auto& c : rep.checks)
    if (!c.pass) failing.push_back(c.name);
  REQUIRE(failing.size() == 1);
  // x^{-1} psi'(x) -> 1, not 0, as x drops to the edge: a genuine violation
  CHECK(failing[0] == "c1_limit_edge");
}

TEST_CASE("validator accepts the compactly-vanishing example density") {
  auto rep = validate_assumptions(example_density(3, 1.0));
  for (const auto& c : rep.checks)
    CHECK_MESSAGE(c.pass, c.name, ": ", c.detail);
  CHECK(rep.all_pass());
  CHECK(rep.checks.size() == 9);
}

TEST_CASE("validator flags a support gap") {
  SpectralDensity ind([](double mu) { return mu > 1.0 && mu < 2.0 ? 1.0 : 0.0; },
                      1.0, "indicator");
  auto rep = validate_assumptions(ind);
  CHECK(!rep.all_pass());
  bool positivity_failed = false;
  for (const auto& c : rep.checks)
    if (c.name == "positivity" && !c.pass) {
      positivity_failed = true;
      REQUIRE(c.witness_mu.has_value());
      CHECK(*c.witness_mu > 2.0);
    }
  CHECK(positivity_failed);
}

TEST_CASE("tabulated density reproduces canonical moments") {
  const char* dir = std::getenv("PAIRSPEC_TEST_DATA");
  REQUIRE_MESSAGE(dir != nullptr, "PAIRSPEC_TEST_DATA not set (run under ctest)");

  DensityConfig dc;
  dc.kind = "tabulated";
  dc.file = std::string(dir) + "/canon_table.csv";
  auto tab = run::make_density(dc);
  CHECK(tab.e0() == 1.0);

  auto ref = canon_density();
  // the monotone interpolant is only O(h^2) near the maximum at mu = 2
  for (double mu : {1.1, 1.5, 2.0, 4.0, 10.0, 25.0})
    CHECK(tab.psi(mu) == doctest::Approx(ref.psi(mu)).epsilon(5e-5));

  CHECK(moment(tab, Weight::one).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(moment(tab, Weight::inverse).value ==
        doctest::Approx(kMomInverse).epsilon(1e-6));
  CHECK(moment(tab, Weight::shale_pair).value ==
        doctest::Approx(kMomShale).epsilon(1e-6));
}

TEST_CASE("interpolated tables stay inside the data range") {
  SpectralDensity t = tabulated_density({1.0, 2.0, 3.0, 4.0},
                                        {0.0, 1.0, 1.0, 0.25}, 1.0);
  CHECK(t.psi(2.0) == doctest::Approx(1.0));
  CHECK(t.psi(3.0) == doctest::Approx(1.0));
  CHECK(t.psi(0.99) == 0.0);
  CHECK(t.psi(4.01) == 0.0);
  // monotone interpolant: no overshoot between equal node values
  for (double mu = 2.05; mu < 3.0; mu += 0.1) {
    CHECK(t.psi(mu) <= 1.0 + 1e-12);
    CHECK(t.psi(mu) >= 1.0 - 1e-12);
  }
}

TEST_CASE("generalized vectors expose weighted norms") {
  auto d = canon_density();
  GeneralizedVector f([&d](double mu) { return std::sqrt(d.psi(mu)); }, 1.0,
                      "sqrt_psi");
  CHECK(f.e0() == 1.0);
  CHECK(f.label() == "sqrt_psi");
  CHECK(f(2.0) == doctest::Approx(std::sqrt(std::exp(-1.0))));
  CHECK(f.norm_sq() == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(f.t_half_sq() == doctest::Approx(3.0).epsilon(1e-11));
  CHECK(f.t_inv_half_sq() == doctest::Approx(kMomInverse).epsilon(1e-11));
  CHECK(f.norm_sq_err() >= 0.0);
  CHECK(f.t_half_sq_err() < 1e-7);
  CHECK(f.t_inv_half_sq_err() < 1e-7);

  GeneralizedVector g([&d](double mu) { return std::sqrt(d.psi(mu)) / mu; }, 1.0,
                      "sqrt_psi_over_mu");
  CHECK(g.norm_sq() == doctest::Approx(kMomInvSq).epsilon(1e-11));
  CHECK(g.t_half_sq() == doctest::Approx(kMomInverse).epsilon(1e-11));
  CHECK(g.t_inv_half_sq() < g.norm_sq());

  // a vector outside D(T^{1/2}) is rejected at construction
  CHECK_THROWS_AS(
      GeneralizedVector([](double mu) { return 1.0 / mu; }, 1.0, "too_fat"),
      DivergenceError);
}

TEST_CASE("coupling integral kappa") {
  auto d = canon_density();
  GeneralizedVector f([&d](double mu) { return std::sqrt(d.psi(mu)); }, 1.0,
                      "sqrt_psi");
  auto k = coupling_kappa(d, f);
  CHECK(k.value == doctest::Approx(kMomInverse).epsilon(1e-11));
  CHECK(k.abs_err < 1e-8);

  // profile orthogonal to T^{-1} g: kappa vanishes by construction
  const double c = 1.0 / kMomInverse;
  GeneralizedVector f0(
      [&d, c](double mu) { return std::sqrt(d.psi(mu)) * (mu - c); }, 1.0,
      "kappa_zero");
  auto k0 = coupling_kappa(d, f0);
  CHECK(std::abs(k0.value) < 1e-12);
  CHECK(k0.abs_err < 1e-10);
}

TEST_CASE("compactified grid is strictly increasing above the edge") {
  auto grid = compactified_grid(1.0, 512);
  REQUIRE(grid.size() == 512);
  CHECK(grid.front() > 1.0);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(grid.back() > 500.0);  // reaches far into the tail
}
