#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "pairspec/errors.hpp"
#include "pairspec/spectrum.hpp"

using namespace pairspec;

// mode-sum references (converged discrete models, fixed here as regression values)
constexpr double kEgHalf = 0.1197213893;    // lambda = 0.5
constexpr double kEgOne = 0.2305010941;     // lambda = 1
constexpr double kEgMinus1 = -0.2791394946; // lambda = -1
constexpr double kEgTildeM2 = -0.6733067578;  // lambda = -2, including binding
constexpr double kTrVVOne = 0.006671093180;
constexpr double kTrVVM2 = 0.031656202803;
constexpr double kFrobM2 = 0.1667853628;    // ||V||_F^2 of the discrete model
constexpr double kEbM2 = 0.10874856073814159;
constexpr double kBetaM2 = 0.80477493315901340;
constexpr double kShiftC0 = -0.26131120342055864;  // eta = 1, kappa = 0 profile

TEST_CASE("binding energy and bound-state data at reference couplings") {
  auto d = canon_density();
  auto cc = critical_couplings(d);

  auto b2 = bound_state(d, -2.0, cc);
  CHECK(b2.x0 == doctest::Approx(-0.35233730695890551).epsilon(1e-10));
  CHECK(b2.beta == doctest::Approx(kBetaM2).epsilon(1e-10));
  CHECK(b2.e_b == doctest::Approx(kEbM2).epsilon(1e-9));
  CHECK(b2.d_prime_x0 == doctest::Approx(-0.44071041824846834).epsilon(1e-9));
  CHECK(b2.ub_norm == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(b2.d_x0_resid < 1e-12);
  CHECK(b2.e_b_err < 1e-8);

  auto b22 = bound_state(d, -2.2, cc);
  CHECK(b22.beta == doctest::Approx(0.63265631753135541).epsilon(1e-9));
  CHECK(b22.e_b == doctest::Approx(0.17519269555399880).epsilon(1e-9));

  auto b24 = bound_state(d, -2.4, cc);
  CHECK(b24.beta == doctest::Approx(0.34273369225528129).epsilon(1e-9));
  CHECK(b24.e_b == doctest::Approx(0.29577557644792022).epsilon(1e-9));

  // binding deepens monotonically toward lambda_c0
  CHECK(b22.e_b > b2.e_b);
  CHECK(b24.e_b > b22.e_b);
  CHECK(b24.beta < b22.beta);
}

TEST_CASE("bound state outside its window is refused") {
  auto d = canon_density();
  auto cc = critical_couplings(d);
  CHECK_THROWS_AS(bound_state(d, -1.0, cc), RegimeError);
  CHECK_THROWS_AS(bound_state(d, 1.0, cc), RegimeError);
  CHECK_THROWS_AS(bound_state(d, -3.0, cc), RegimeError);
  CHECK_THROWS_AS(bound_state(d, cc.lambda_c, cc), RegimeError);
  CHECK_THROWS_AS(bound_state(d, cc.lambda_c0, cc), RegimeError);

  // massless density: the gap closes and no window remains
  auto d0 = example_density(3, 0.0);
  auto cc0 = critical_couplings(d0);
  CHECK_THROWS_AS(bound_state(d0, -7.0, cc0), RegimeError);
}

TEST_CASE("ground-state energy matches the mode-sum references") {
  auto d = canon_density();
  auto cc = critical_couplings(d);
  CHECK(ground_energy(d, 0.0, cc) == 0.0);
  CHECK(ground_energy(d, 0.5, cc) == doctest::Approx(kEgHalf).epsilon(1e-9));
  CHECK(ground_energy(d, 1.0, cc) == doctest::Approx(kEgOne).epsilon(1e-9));
  CHECK(ground_energy(d, -1.0, cc) == doctest::Approx(kEgMinus1).epsilon(1e-9));

  // in the bound window the mode sum sees the full ground energy
  const double eg = ground_energy(d, -2.0, cc);
  const double eb = bound_state(d, -2.0, cc).e_b;
  CHECK(eg - eb == doctest::Approx(kEgTildeM2).epsilon(1e-9));

  CHECK_THROWS_AS(ground_energy(d, cc.lambda_c0, cc), RegimeError);
  CHECK_THROWS_AS(ground_energy(d, -3.0, cc), RegimeError);
}

TEST_CASE("Hilbert-Schmidt traces and the energy identity") {
  auto d = canon_density();
  auto cc = critical_couplings(d);

  auto tp1 = hs_trace_pair(d, 1.0, cc);
  CHECK(tp1.unweighted == doctest::Approx(kTrVVOne).epsilon(1e-8));
  CHECK(tp1.weighted ==
        doctest::Approx(0.25 * cc.norm_g_sq.value - kEgOne).epsilon(1e-8));
  CHECK(tp1.err_weighted < 1e-9);
  CHECK(tp1.err_unweighted < 1e-9);

  auto tp2 = hs_trace_pair(d, -2.0, cc);
  CHECK(tp2.unweighted == doctest::Approx(kTrVVM2).epsilon(1e-8));

  auto tp0 = hs_trace_pair(d, 0.0, cc);
  CHECK(tp0.weighted == 0.0);
  CHECK(tp0.unweighted == 0.0);

  CHECK_THROWS_AS(hs_trace_pair(d, cc.lambda_c, cc), RegimeError);
}

TEST_CASE("transformed-mode norm splits into trace and bound parts") {
  auto d = canon_density();
  auto cc = critical_couplings(d);
  const double trace_part = hs_trace_pair(d, -2.0, cc).unweighted;
  const auto bs = bound_state(d, -2.0, cc);
  CHECK(trace_part + bs.e_b / bs.beta == doctest::Approx(kFrobM2).epsilon(1e-7));
}

TEST_CASE("eta shift scales quadratically and respects its domain") {
  auto d = canon_density();
  auto cc = critical_couplings(d);
  GeneralizedVector f([&d](double mu) { return std::sqrt(d.psi(mu)); }, 1.0,
                      "sqrt_psi");
  CHECK(shift_Efg(d, f, 0.0, 1.0, cc) == 0.0);
  const double s1 = shift_Efg(d, f, 1.0, 1.0, cc);
  const double s2 = shift_Efg(d, f, 2.0, 1.0, cc);
  CHECK(s1 < 0.0);
  CHECK(s2 == doctest::Approx(4.0 * s1).epsilon(1e-12));
  CHECK_THROWS_AS(shift_Efg(d, f, 1.0, cc.lambda_c0, cc), RegimeError);
}

TEST_CASE("classification across the coupling regimes") {
  auto d = canon_density();
  auto cc = critical_couplings(d);

  auto sup = classify(d, 1.0);
  CHECK(sup.regime == Regime::supercritical);
  REQUIRE(sup.e_g.has_value());
  CHECK(*sup.e_g == doctest::Approx(kEgOne).epsilon(1e-9));
  CHECK(*sup.e_b == 0.0);
  REQUIRE(sup.point_spectrum.size() == 1);
  CHECK(sup.point_spectrum[0] == *sup.e_g);
  CHECK(*sup.ac_start == doctest::Approx(1.0 + kEgOne).epsilon(1e-9));
  CHECK(*sup.sc_empty);
  CHECK(*sup.bounded_below);
  CHECK(!sup.sigma_full_line);
  CHECK(*sup.hs_norm_sq == doctest::Approx(kTrVVOne).epsilon(1e-8));

  auto bnd = classify(d, -2.0, 0.0, nullptr, 5);
  CHECK(bnd.regime == Regime::bound);
  REQUIRE(bnd.point_spectrum.size() == 6);
  CHECK(bnd.point_spectrum[0] == doctest::Approx(kEgTildeM2).epsilon(1e-9));
  for (std::size_t i = 1; i < 6; ++i)
    CHECK(bnd.point_spectrum[i] - bnd.point_spectrum[i - 1] ==
          doctest::Approx(kBetaM2).epsilon(1e-9));
  CHECK(*bnd.ac_start == doctest::Approx(1.0 + kEgTildeM2).epsilon(1e-9));
  CHECK(bnd.notes.find("embed") != std::string::npos);

  auto unb = classify(d, -3.0);
  CHECK(unb.regime == Regime::unbounded);
  CHECK(!*unb.bounded_below);
  CHECK(!unb.e_g.has_value());
  CHECK(unb.point_spectrum.empty());

  CHECK(classify(d, cc.lambda_c).regime == Regime::critical_c);
  auto c0 = classify(d, cc.lambda_c0);
  CHECK(c0.regime == Regime::critical_c0);
  CHECK(*c0.bounded_below);
  CHECK(!c0.shift.has_value());

  CHECK_THROWS_AS(classify(d, 1.0, 1.0, nullptr), InputError);
}

TEST_CASE("eta branches at the lower critical coupling") {
  auto d = canon_density();
  auto cc = critical_couplings(d);

  GeneralizedVector fs([&d](double mu) { return std::sqrt(d.psi(mu)); }, 1.0,
                       "sqrt_psi");
  auto full = classify(d, cc.lambda_c0, 1.0, &fs);
  CHECK(full.regime == Regime::critical_c0);
  REQUIRE(full.kappa.has_value());
  CHECK(*full.kappa == doctest::Approx(cc.t_inv_g_sq.value).epsilon(1e-10));
  CHECK(full.sigma_full_line);
  CHECK(!*full.bounded_below);
  CHECK(!full.shift.has_value());

  const double c = cc.norm_g_sq.value / cc.t_inv_g_sq.value;
  GeneralizedVector f0(
      [&d, c](double mu) { return std::sqrt(d.psi(mu)) * (mu - c); }, 1.0,
      "kappa_zero");
  auto shifted = classify(d, cc.lambda_c0, 1.0, &f0);
  CHECK(shifted.regime == Regime::critical_c0);
  CHECK(std::abs(*shifted.kappa) < 1e-10);
  CHECK(!shifted.sigma_full_line);
  CHECK(*shifted.bounded_below);
  REQUIRE(shifted.shift.has_value());
  CHECK(*shifted.shift == doctest::Approx(kShiftC0).epsilon(1e-9));
  CHECK(*shifted.shift_err < 1e-8);
}

TEST_CASE("witness series flags the unbounded regime") {
  auto d = canon_density();

  auto ws = unboundedness_witness(d, -3.0, 0.1, 0.1, 1000000);
  CHECK(ws.q1 > 0.0);
  CHECK(ws.q2 > 0.0);
  CHECK(ws.c_lambda < 0.0);
  REQUIRE(!ws.rayleigh.empty());
  CHECK(ws.rayleigh.back().n == 1000000);
  CHECK(ws.rayleigh.back().rayleigh ==
        doctest::Approx(-245.709584).epsilon(1e-6));
  CHECK(!ws.crossing_n.has_value());  // -1e3 is far beyond this horizon
  REQUIRE(ws.crossing_estimate.has_value());
  CHECK(*ws.crossing_estimate > 1.2e7);
  CHECK(*ws.crossing_estimate < 2.2e7);

  auto ok = unboundedness_witness(d, -2.0, 0.1, 0.1, 10000);
  CHECK(ok.c_lambda > 0.0);
  CHECK(ok.rayleigh.back().rayleigh > 0.0);
  CHECK(!ok.crossing_n.has_value());
}

TEST_CASE("quadratic-form scan certifies positivity at lambda = -2") {
  auto d = canon_density();
  auto scan = scan_c_lambda(d, -2.0);
  CHECK(scan.min_c > 0.1);
  CHECK(scan.delta_at > 0.0);
  CHECK(scan.epsilon_at > 0.0);

  auto bad = scan_c_lambda(d, -3.0);
  CHECK(bad.min_c < 0.0);
}
