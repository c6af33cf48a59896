#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "pairspec/dispersion.hpp"
#include "pairspec/errors.hpp"

using namespace pairspec;

// high-precision references for the canonical density
constexpr double kLambdaC0 = -2.4773775931588827;
constexpr double kLambdaC = -1.5657504413736735;
constexpr double kLambdaT = 0.6648547307338039;
constexpr double kD0AtM2 = -0.2773427662235548;     // D(0), lambda = -2
constexpr double kX0AtM2 = -0.35233730695890551;    // zero of D, lambda = -2
constexpr double kBetaAtM2 = 0.80477493315901340;   // sqrt(E0^2 + x0)
constexpr double kDprimeAtM2 = -0.44071041824846834;

TEST_CASE("critical couplings of the canonical density") {
  auto d = canon_density();
  auto cc = critical_couplings(d);
  CHECK(cc.lambda_c0 == doctest::Approx(kLambdaC0).epsilon(1e-10));
  CHECK(cc.lambda_c == doctest::Approx(kLambdaC).epsilon(1e-10));
  CHECK(cc.lambda_T == doctest::Approx(kLambdaT).epsilon(1e-10));
  CHECK(cc.lambda_c0 < cc.lambda_c);
  CHECK(cc.lambda_T > 0.0);

  CHECK(cc.norm_g_sq.value == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(cc.t_half_g_sq.value == doctest::Approx(3.0).epsilon(1e-11));
  CHECK(cc.t_inv_g_sq.value * std::abs(cc.lambda_c0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cc.shale_integral.value * std::abs(cc.lambda_c) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("D is symmetric under conjugation and analytic off the cut") {
  auto d = canon_density();
  const double lambda = -2.0;
  std::mt19937 rng(20260814);
  std::uniform_real_distribution<double> re(-3.0, -0.05), im(0.05, 3.0);
  for (int i = 0; i < 100; ++i) {
    const std::complex<double> z(re(rng), im(rng));
    auto up = eval_D(d, lambda, z);
    auto dn = eval_D(d, lambda, std::conj(z));
    CHECK(std::abs(dn.value - std::conj(up.value)) <=
          2 * (up.abs_err + dn.abs_err) + 1e-13);
  }
}

TEST_CASE("real-axis evaluation agrees with the complex path") {
  auto d = canon_density();
  for (double lambda : {-2.0, -1.0, 1.0}) {
    for (double x : {-3.0, -1.0, -0.2, -0.01}) {
      auto fast = eval_D_real(d, lambda, x);
      auto slow = eval_D(d, lambda, {x, 0.0});
      CHECK(fast.real() ==
            doctest::Approx(slow.value.real()).epsilon(1e-11));
      CHECK(std::abs(slow.value.imag()) < 1e-12);
    }
  }
}

TEST_CASE("D decreases along the negative real axis for attractive coupling") {
  auto d = canon_density();
  const double lambda = -2.0;
  double prev = 1e300;
  for (double x : {-8.0, -4.0, -2.0, -1.0, -0.5, -0.1, 0.0}) {
    const double v = eval_D_real(d, lambda, x).real();
    CHECK(v < prev);
    prev = v;
  }
  CHECK(eval_D_real(d, lambda, 0.0).real() ==
        doctest::Approx(kD0AtM2).epsilon(1e-10));
}

TEST_CASE("derivative of D matches finite differences") {
  auto d = canon_density();
  const double lambda = -2.0;
  for (double x : {-2.0, -1.0, -0.3524}) {
    const double h = 1e-5;
    const double fd = (eval_D_real(d, lambda, x + h).real() -
                       eval_D_real(d, lambda, x - h).real()) /
                      (2 * h);
    CHECK(eval_D_prime(d, lambda, x).real() ==
          doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("bound-state root of D below the spectrum") {
  auto d = canon_density();
  auto cc = critical_couplings(d);

  const double x0 = find_x0(d, -2.0, cc);
  CHECK(x0 == doctest::Approx(kX0AtM2).epsilon(1e-10));
  CHECK(std::sqrt(1.0 + x0) == doctest::Approx(kBetaAtM2).epsilon(1e-10));
  CHECK(eval_D_prime(d, -2.0, x0).real() ==
        doctest::Approx(kDprimeAtM2).epsilon(1e-9));
  CHECK(std::abs(eval_D_real(d, -2.0, x0).real()) < 1e-12);

  // deeper couplings push the root down
  const double x1 = find_x0(d, -2.2, cc);
  const double x2 = find_x0(d, -2.4, cc);
  CHECK(x1 == doctest::Approx(-0.59974598388766480).epsilon(1e-9));
  CHECK(x2 == doctest::Approx(-0.88253361619306214).epsilon(1e-9));
  CHECK(x2 < x1);
  CHECK(x1 < x0);

  // no root outside (lambda_c0, lambda_c)
  CHECK_THROWS_AS(find_x0(d, -1.0, cc), RegimeError);
  CHECK_THROWS_AS(find_x0(d, 1.0, cc), RegimeError);
  CHECK_THROWS_AS(find_x0(d, cc.lambda_c, cc), RegimeError);
  CHECK_THROWS_AS(find_x0(d, cc.lambda_c0, cc), RegimeError);
}

TEST_CASE("boundary values satisfy the jump identity") {
  auto d = canon_density();
  for (double lambda : {1.0, -1.0, -2.0}) {
    for (double s : {0.1, 1.0, 4.0, 25.0}) {
      auto bp = boundary_values(d, lambda, s);
      CHECK(bp.s == s);
      // d_plus - d_minus = i pi lambda mu psi(mu) / (2 mu) * 2 ... collapses
      // to i * 2 * imag_part by construction; check both representations
      const std::complex<double> jump = bp.d_plus - bp.d_minus;
      CHECK(jump.real() == 0.0);
      CHECK(jump.imag() == doctest::Approx(2.0 * bp.imag_part).epsilon(1e-14));
      const double expect_im =
          0.5 * lambda * M_PI * d.psi(std::sqrt(1.0 + s));
      CHECK(bp.imag_part == doctest::Approx(expect_im).epsilon(1e-12));
      CHECK(bp.d_plus.real() == doctest::Approx(bp.d_minus.real()).epsilon(1e-14));
      CHECK(bp.d_plus.real() ==
            doctest::Approx(1.0 + 0.5 * lambda * M_PI * bp.hilbert).epsilon(1e-12));
    }
  }
}

TEST_CASE("the two Hilbert-transform methods agree") {
  auto d = canon_density();
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double s = 0.3 * std::pow(1000.0 / 0.3, i / 39.0);
    const double x = 1.0 + s;
    const double pv = hilbert_phi(d, x, HilbertMethod::pv_subtracted);
    const double po = hilbert_phi(d, x, HilbertMethod::poisson_extrapolated);
    worst = std::max(worst, std::abs(pv - po));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("Hilbert transform is linear in the density") {
  auto d = canon_density();
  SpectralDensity d2(
      [](double mu) {
        const double t = mu - 1.0;
        return t <= 0.0 ? 0.0 : 2.0 * t * std::exp(-t);
      },
      1.0, "canon_x2");
  for (double x : {1.7, 3.0, 10.0}) {
    CHECK(hilbert_phi(d2, x) == doctest::Approx(2.0 * hilbert_phi(d, x)).epsilon(1e-9));
  }
}

TEST_CASE("boundary values approach D at the spectral edge") {
  auto d = canon_density();
  for (double lambda : {1.0, -1.0, -2.0}) {
    auto bp = boundary_values(d, lambda, 0.0);
    auto dm = eval_D_real(d, lambda, -1e-6);
    CHECK(std::abs(bp.d_plus.real() - dm.real()) < 1e-4);
  }
}

TEST_CASE("distance to the real axis of the boundary function") {
  auto d = canon_density();
  auto at = [&](double lambda) { return delta_inf(d, lambda); };

  auto m2 = at(-2.0);
  CHECK(m2.value == doctest::Approx(0.2773427662).epsilon(1e-8));
  CHECK(m2.s_at == 0.0);
  CHECK(!m2.near_zero);

  auto p1 = at(1.0);
  CHECK(p1.value == doctest::Approx(0.8488123641).epsilon(1e-6));
  CHECK(p1.s_at == doctest::Approx(20.24).epsilon(0.05));

  auto crit = at(kLambdaC);
  CHECK(crit.value < 1e-8);
  CHECK(crit.near_zero);
}
