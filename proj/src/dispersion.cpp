#include "pairspec/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairspec/errors.hpp"

namespace pairspec {

const char* hilbert_method_name(HilbertMethod m) {
  return m == HilbertMethod::pv_subtracted ? "pv_subtracted" : "poisson_extrapolated";
}

HilbertMethod parse_hilbert_method(const std::string& name) {
  if (name == "pv_subtracted") return HilbertMethod::pv_subtracted;
  if (name == "poisson_extrapolated") return HilbertMethod::poisson_extrapolated;
  throw InputError("unknown hilbert method: " + name);
}

// ---- D and D' ----

DispersionValue eval_D_real(const SpectralDensity& d, double lambda, double x,
                            const quad::Options& opt) {
  if (x > 0.0) throw InputError("eval_D_real: x must be <= 0");
  if (lambda == 0.0) return {std::complex<double>(1.0, 0.0), 0.0};
  const double e0 = d.e0();
  auto f = [&](double mu) {
    return mu * d.psi(mu) / (mu * mu - e0 * e0 - x);
  };
  quad::Result r = quad::integrate_half_line(f, e0, opt);
  quad::require_converged(r, "eval_D_real");
  return {std::complex<double>(1.0 + lambda * r.value, 0.0),
          std::abs(lambda) * r.abs_err};
}

DispersionValue eval_D(const SpectralDensity& d, double lambda,
                       std::complex<double> z, const quad::Options& opt) {
  if (z.imag() == 0.0) {
    if (z.real() > 0.0)
      throw InputError("eval_D: z lies on the positive real axis (cut)");
    return eval_D_real(d, lambda, z.real(), opt);
  }
  if (lambda == 0.0) return {std::complex<double>(1.0, 0.0), 0.0};
  const double e0 = d.e0();
  const double a = z.real(), b = z.imag();
  std::vector<double> splits;
  if (a > 0.0) splits.push_back(std::sqrt(e0 * e0 + a));
  auto den = [&](double mu) {
    const double q = mu * mu - e0 * e0 - a;
    return q * q + b * b;
  };
  auto f_re = [&](double mu) {
    const double q = mu * mu - e0 * e0 - a;
    return mu * d.psi(mu) * q / den(mu);
  };
  auto f_im = [&](double mu) { return mu * d.psi(mu) * b / den(mu); };
  quad::Result re = quad::integrate_half_line(f_re, e0, splits, opt);
  quad::require_converged(re, "eval_D (real part)");
  quad::Result im = quad::integrate_half_line(f_im, e0, splits, opt);
  quad::require_converged(im, "eval_D (imaginary part)");
  return {std::complex<double>(1.0 + lambda * re.value, lambda * im.value),
          std::abs(lambda) * (re.abs_err + im.abs_err)};
}

DispersionValue eval_D_prime(const SpectralDensity& d, double lambda, double x,
                             const quad::Options& opt) {
  if (!(x < 0.0)) throw InputError("eval_D_prime: x must be negative");
  if (lambda == 0.0) return {std::complex<double>(0.0, 0.0), 0.0};
  const double e0 = d.e0();
  auto f = [&](double mu) {
    const double q = mu * mu - e0 * e0 - x;
    return mu * d.psi(mu) / (q * q);
  };
  quad::Result r = quad::integrate_half_line(f, e0, opt);
  quad::require_converged(r, "eval_D_prime");
  return {std::complex<double>(lambda * r.value, 0.0),
          std::abs(lambda) * r.abs_err};
}

// ---- Hilbert transform of phi_g ----

namespace {

double hilbert_pv_subtracted(const SpectralDensity& d, double x,
                             const quad::Options& opt, double* err_out) {
  const double lo = d.e0() * d.e0();
  double total = 0.0, err = 0.0;
  if (x <= lo) {
    // no interior singularity; at x == lo the integrand stays bounded because
    // phi vanishes at the edge
    auto f = [&](double u) { return d.phi(u) / (u - x); };
    quad::Result r = quad::integrate_half_line(f, lo, opt);
    quad::require_converged(r, "hilbert_phi (off-support)");
    total = r.value;
    err = r.abs_err;
  } else {
    const double w = std::max(1.0, 0.1 * x);
    const double xlo = std::max(lo, x - w);
    const double xhi = x + w;
    const double phix = d.phi(x);
    auto sub = [&](double u) {
      const double du = u - x;
      if (std::abs(du) < 1e-300) return d.phi_prime(x);
      return (d.phi(u) - phix) / du;
    };
    quad::Result r1 = quad::integrate(sub, xlo, xhi, {x}, opt);
    quad::require_converged(r1, "hilbert_phi (window)");
    total = r1.value + phix * std::log((xhi - x) / (x - xlo));
    err = r1.abs_err;
    if (xlo > lo) {
      auto f = [&](double u) { return d.phi(u) / (u - x); };
      quad::Result r2 = quad::integrate(f, lo, xlo, opt);
      quad::require_converged(r2, "hilbert_phi (left tail)");
      total += r2.value;
      err += r2.abs_err;
    }
    auto ftail = [&](double u) { return d.phi(u) / (u - x); };
    quad::Result r3 = quad::integrate_half_line(ftail, xhi, opt);
    quad::require_converged(r3, "hilbert_phi (right tail)");
    total += r3.value;
    err += r3.abs_err;
  }
  if (err_out) *err_out = err / M_PI;
  return total / M_PI;
}

double conj_poisson(const SpectralDensity& d, double x, double eps,
                    const quad::Options& opt) {
  const double lo = d.e0() * d.e0();
  auto f = [&](double u) {
    const double du = u - x;
    return d.phi(u) * du / (du * du + eps * eps);
  };
  const double cut = std::max(lo + 1.0, x + 10.0 * eps) + 50.0;
  std::vector<double> splits;
  for (double p : {x - 10.0 * eps, x, x + 10.0 * eps})
    if (p > lo && p < cut) splits.push_back(p);
  quad::Result head = quad::integrate(f, lo, cut, splits, opt);
  quad::require_converged(head, "hilbert_phi (poisson head)");
  quad::Result tail = quad::integrate_half_line(f, cut, opt);
  quad::require_converged(tail, "hilbert_phi (poisson tail)");
  return (head.value + tail.value) / M_PI;
}

double hilbert_poisson_extrapolated(const SpectralDensity& d, double x,
                                    const quad::Options& opt) {
  const double c1 = conj_poisson(d, x, 1e-2, opt);
  const double c2 = conj_poisson(d, x, 5e-3, opt);
  const double c3 = conj_poisson(d, x, 2.5e-3, opt);
  const double r1 = 2.0 * c2 - c1;
  const double r2 = 2.0 * c3 - c2;
  const double out = (4.0 * r2 - r1) / 3.0;
  if (std::abs(r2 - r1) > 1e-3 * std::max(1.0, std::abs(out)))
    throw NumericError("hilbert_phi: poisson extrapolation stages disagree", r1, r2);
  return out;
}

}  // namespace

double hilbert_phi(const SpectralDensity& d, double x, HilbertMethod method,
                   const quad::Options& opt) {
  if (method == HilbertMethod::pv_subtracted)
    return hilbert_pv_subtracted(d, x, opt, nullptr);
  return hilbert_poisson_extrapolated(d, x, opt);
}

BoundaryPair boundary_values(const SpectralDensity& d, double lambda, double s,
                             HilbertMethod method, const quad::Options& opt) {
  if (s < 0.0) throw InputError("boundary_values: s must be >= 0");
  BoundaryPair bp;
  bp.s = s;
  const double e0 = d.e0();
  const double x = e0 * e0 + s;
  if (lambda == 0.0) {
    bp.d_plus = bp.d_minus = std::complex<double>(1.0, 0.0);
    bp.hilbert = hilbert_phi(d, x, method, opt);
    return bp;
  }
  double err = 0.0;
  if (method == HilbertMethod::pv_subtracted)
    bp.hilbert = hilbert_pv_subtracted(d, x, opt, &err);
  else
    bp.hilbert = hilbert_poisson_extrapolated(d, x, opt);
  const double re = 1.0 + 0.5 * lambda * M_PI * bp.hilbert;
  bp.imag_part = 0.5 * lambda * M_PI * d.psi(std::sqrt(x));
  bp.d_plus = std::complex<double>(re, bp.imag_part);
  bp.d_minus = std::complex<double>(re, -bp.imag_part);
  bp.abs_err = 0.5 * std::abs(lambda) * M_PI * err;
  return bp;
}

// ---- critical couplings ----

CriticalCouplings critical_couplings(const SpectralDensity& d,
                                     const quad::Options& opt) {
  CriticalCouplings cc;
  cc.norm_g_sq = moment(d, Weight::one, 0.0, opt);
  cc.t_inv_g_sq = moment(d, Weight::inverse, 0.0, opt);
  cc.t_half_g_sq = moment(d, Weight::linear, 0.0, opt);
  cc.shale_integral = moment(d, Weight::shale_pair, 0.0, opt);
  if (!(cc.t_inv_g_sq.value > 0.0) || !(cc.shale_integral.value > 0.0))
    throw InputError("critical_couplings: density has vanishing mass");
  cc.lambda_c0 = -1.0 / cc.t_inv_g_sq.value;
  cc.lambda_c = -1.0 / cc.shale_integral.value;
  const double tinv = std::sqrt(cc.t_inv_g_sq.value);
  const double thalf = std::sqrt(cc.t_half_g_sq.value);
  cc.lambda_T = 1.0 / (tinv * (tinv + thalf));
  return cc;
}

// ---- root of D on the negative axis ----

namespace {

// Brent's method on a sign-changing bracket [a, b].
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double fa, double fb, double xtol_scale) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw NumericError("brent_root: endpoints do not bracket", fa, fb);
  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if (fb * fc > 0.0) {
      c = a; fc = fa; d = b - a; e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * 2.220446049250313e-16 * std::abs(b) +
                       0.5 * xtol_scale * std::max(1.0, std::abs(b));
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (xm > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

}  // namespace

double find_x0(const SpectralDensity& d, double lambda,
               const CriticalCouplings& cc, const quad::Options& opt) {
  if (near_boundary(lambda, cc.lambda_c))
    throw RegimeError("find_x0: lambda is at the critical coupling lambda_c");
  if (lambda >= cc.lambda_c)
    throw RegimeError("find_x0: requires lambda < lambda_c");
  if (near_boundary(lambda, cc.lambda_c0))
    throw RegimeError("find_x0: lambda is at the critical coupling lambda_c0");
  if (lambda <= cc.lambda_c0)
    throw RegimeError("find_x0: requires lambda > lambda_c0 (the root leaves the gap)");
  const quad::Options tight = opt.with_rel_tol(std::min(opt.rel_tol, 1e-13));
  auto Df = [&](double x) { return eval_D_real(d, lambda, x, tight).real(); };

  // D(0^-) = 1 - lambda/lambda_c < 0; D -> 1 at -infinity. Expand leftward.
  double hi = 0.0;
  double fhi = 1.0 + lambda * cc.shale_integral.value;
  double lo = -1.0, flo = Df(lo);
  int guard = 0;
  while (flo <= 0.0) {
    hi = lo;
    fhi = flo;
    lo *= 2.0;
    if (++guard > 60)
      throw NumericError("find_x0: bracket expansion failed", lo, flo);
    flo = Df(lo);
  }
  double x0 = brent_root(Df, lo, hi, flo, fhi, 1e-13);
  // Newton polish against the residual target
  for (int i = 0; i < 3; ++i) {
    const double r = Df(x0);
    if (std::abs(r) <= 0.25e-12 * (1.0 + std::abs(lambda))) break;
    const double dp = eval_D_prime(d, lambda, x0, tight).real();
    if (dp == 0.0) break;
    const double step = r / dp;
    if (!(x0 - step < 0.0)) break;
    x0 -= step;
  }
  if (!(x0 < 0.0)) throw NumericError("find_x0: root escaped the negative axis", x0, 0.0);
  return x0;
}

double find_x0(const SpectralDensity& d, double lambda, const quad::Options& opt) {
  return find_x0(d, lambda, critical_couplings(d, opt), opt);
}

// ---- infimum of |D+| over the boundary ----

namespace {

double golden_min(const std::function<double(double)>& f, double a, double b,
                  int iters = 40) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace

DeltaInf delta_inf(const SpectralDensity& d, double lambda, HilbertMethod method,
                   const quad::Options& opt, int grid_points) {
  if (lambda == 0.0) return {1.0, 0.0, false};
  if (grid_points < 8) throw InputError("delta_inf: grid too coarse");
  auto absdp = [&](double s) {
    return std::abs(boundary_values(d, lambda, s, method, opt).d_plus);
  };
  std::vector<double> sg, vals;
  sg.push_back(0.0);
  for (int i = 0; i < grid_points; ++i) {
    const double u = (i + 0.5) / grid_points;
    sg.push_back(u / (1.0 - u));
  }
  vals.reserve(sg.size());
  for (double s : sg) vals.push_back(absdp(s));

  // local refinement around the three smallest grid values
  std::vector<std::size_t> order(sg.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  double best = vals[order[0]], best_s = sg[order[0]];
  for (std::size_t k = 0; k < 3 && k < order.size(); ++k) {
    const std::size_t i = order[k];
    const double a = i == 0 ? 0.0 : sg[i - 1];
    const double b = i + 1 < sg.size() ? sg[i + 1] : sg[i] * 2.0 + 1.0;
    const double s = golden_min(absdp, a, b);
    const double v = absdp(s);
    if (v < best) {
      best = v;
      best_s = s;
    }
  }
  return {best, best_s, best < 1e-10};
}

}  // namespace pairspec
