#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pairspec/errors.hpp"
#include "pairspec/quadrature.hpp"

using namespace pairspec;

TEST_CASE("polynomials on a finite interval are exact") {
  auto r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  auto r7 = quad::integrate([](double x) { return 7 * std::pow(x, 6); }, -1.0, 2.0);
  CHECK(r7.value == doctest::Approx(std::pow(2.0, 7) + 1.0).epsilon(1e-13));
}

TEST_CASE("oscillatory and peaked integrands") {
  auto osc = quad::integrate([](double x) { return std::sin(51 * x); }, 0.0,
                             M_PI);
  CHECK(osc.converged);
  CHECK(osc.value == doctest::Approx(2.0 / 51.0).epsilon(1e-10));

  // narrow Gaussian away from any panel boundary
  auto peak = quad::integrate(
      [](double x) { return std::exp(-1e4 * (x - 0.37) * (x - 0.37)); }, 0.0,
      1.0);
  CHECK(peak.converged);
  CHECK(peak.value ==
        doctest::Approx(std::sqrt(M_PI / 1e4)).epsilon(1e-10));
}

TEST_CASE("interior splits anchor integrable kinks") {
  auto f = [](double x) { return std::sqrt(std::abs(x - 0.5)); };
  auto r = quad::integrate(f, 0.0, 1.0, std::vector<double>{0.5});
  const double exact = 2.0 / 3.0 * (std::pow(0.5, 1.5) + std::pow(0.5, 1.5));
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("half-line compactification") {
  auto r = quad::integrate_half_line([](double t) { return std::exp(-t); }, 0.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));

  // shifted edge, polynomial-times-exponential decay
  auto r2 = quad::integrate_half_line(
      [](double mu) { return (mu - 1.0) * std::exp(-(mu - 1.0)); }, 1.0);
  CHECK(r2.value == doctest::Approx(1.0).epsilon(1e-12));

  // slow algebraic decay ~ mu^-3 still converges
  auto r3 = quad::integrate_half_line(
      [](double mu) { return 1.0 / (mu * mu * mu); }, 1.0);
  CHECK(r3.value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("divergent integrals are flagged, not silently returned") {
  auto harmonic = quad::integrate_half_line([](double mu) { return 1.0 / mu; }, 1.0);
  CHECK(!harmonic.converged);
  CHECK(harmonic.divergence_suspected);

  auto root = quad::integrate_half_line(
      [](double mu) { return 1.0 / std::sqrt(mu); }, 1.0);
  CHECK(!root.converged);

  auto edge = quad::integrate([](double x) { return 1.0 / x; }, 0.0, 1.0);
  CHECK(!edge.converged);
  CHECK(edge.divergence_suspected);
  CHECK(edge.worst_at < 1e-3);  // the refinement got stuck at the left edge
  CHECK_THROWS_AS(quad::require_converged(edge, "test"), DivergenceError);
}

TEST_CASE("integrable edge singularity converges without a hint") {
  auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("tolerance knobs are honored") {
  quad::Options loose;
  loose.rel_tol = 1e-4;
  auto f = [](double x) { return std::exp(x) * std::cos(3 * x); };
  auto rl = quad::integrate(f, 0.0, 3.0, loose);
  auto rt = quad::integrate(f, 0.0, 3.0, loose.with_rel_tol(1e-12));
  CHECK(rl.converged);
  CHECK(rt.converged);
  CHECK(rt.abs_err <= rl.abs_err);
  CHECK(std::abs(rt.value - rl.value) <= 10 * (rl.abs_err + rt.abs_err));
}

TEST_CASE("results are deterministic") {
  auto f = [](double x) { return std::exp(-x * x) * std::cos(5 * x); };
  auto a = quad::integrate(f, -3.0, 9.0);
  auto b = quad::integrate(f, -3.0, 9.0);
  CHECK(a.value == b.value);
  CHECK(a.n_eval == b.n_eval);
}

TEST_CASE("gauss-legendre nodes integrate polynomials of degree 2n-1") {
  std::vector<double> x, w;
  quad::gauss_legendre(12, x, w);
  REQUIRE(x.size() == 12);
  double wsum = 0.0;
  for (double wi : w) wsum += wi;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

  std::mt19937 rng(20260814);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c(2 * 12);  // degree 23
    for (auto& ci : c) ci = coef(rng);
    double qsum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double p = 0.0;
      for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
        p = p * x[i] + c[k];
      qsum += w[i] * p;
    }
    double exact = 0.0;  // int_-1^1 x^k = 2/(k+1) for even k
    for (std::size_t k = 0; k < c.size(); k += 2)
      exact += c[k] * 2.0 / static_cast<double>(k + 1);
    CHECK(qsum == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("non-finite integrand values raise an evaluation error") {
  auto f = [](double x) { return x == x ? std::numeric_limits<double>::quiet_NaN() : 0.0; };
  CHECK_THROWS_AS(quad::integrate(f, 0.0, 1.0), EvaluationError);
  try {
    quad::integrate(f, 0.25, 0.75);
  } catch (const EvaluationError& e) {
    CHECK(e.has_where);
    CHECK(e.where >= 0.25);
    CHECK(e.where <= 0.75);
  }
}
