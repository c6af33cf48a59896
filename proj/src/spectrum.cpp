#include "pairspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairspec/errors.hpp"

namespace pairspec {

// ---- Hilbert-Schmidt traces ----

namespace {

struct TraceGrid {
  std::vector<double> mu, jw, psi;
};

TraceGrid trace_grid(const SpectralDensity& d, int n) {
  std::vector<double> xt, wt;
  quad::gauss_legendre(n, xt, wt);
  TraceGrid g;
  g.mu.resize(n);
  g.jw.resize(n);
  g.psi.resize(n);
  const double e0 = d.e0();
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (xt[i] + 1.0);
    const double omt = 1.0 - t;
    g.mu[i] = e0 + t / omt;
    g.jw[i] = 0.5 * wt[i] / (omt * omt);
    g.psi[i] = std::isfinite(g.mu[i]) ? d.psi(g.mu[i]) : 0.0;
  }
  return g;
}

std::pair<double, double> trace_at_resolution(const SpectralDensity& d,
                                              double lambda, HilbertMethod method,
                                              const quad::Options& opt, int n) {
  const TraceGrid g = trace_grid(d, n);
  const double e0 = d.e0();
  double tw = 0.0, tu = 0.0;
  for (int i = 0; i < n; ++i) {
    const double base = g.jw[i] * g.psi[i];
    if (!(base > 1e-280)) continue;  // node beyond the density's reach
    double inner = 0.0;
    for (int j = 0; j < n; ++j) {
      const double sum = g.mu[i] + g.mu[j];
      inner += g.jw[j] * g.psi[j] / (sum * sum);
    }
    const double s = g.mu[i] * g.mu[i] - e0 * e0;
    const double dm2 = std::norm(boundary_values(d, lambda, s, method, opt).d_minus);
    tw += base * g.mu[i] / dm2 * inner;
    tu += base / dm2 * inner;
  }
  const double pref = 0.25 * lambda * lambda;
  return {pref * tw, pref * tu};
}

}  // namespace

TracePair hs_trace_pair(const SpectralDensity& d, double lambda,
                        const CriticalCouplings& cc, HilbertMethod method,
                        const quad::Options& opt, int n_outer) {
  if (lambda == 0.0) return {};
  if (near_boundary(lambda, cc.lambda_c))
    throw RegimeError("hs_trace: lambda at lambda_c, |D-| is not bounded away from 0");
  if (n_outer < 16) throw InputError("hs_trace: grid too coarse");
  auto [w_hi, u_hi] = trace_at_resolution(d, lambda, method, opt, n_outer);
  auto [w_lo, u_lo] = trace_at_resolution(d, lambda, method, opt, n_outer / 2);
  TracePair tp;
  tp.weighted = w_hi;
  tp.unweighted = u_hi;
  tp.err_weighted = std::abs(w_hi - w_lo);
  tp.err_unweighted = std::abs(u_hi - u_lo);
  return tp;
}

double hs_trace_weighted(const SpectralDensity& d, double lambda, bool weighted,
                         const quad::Options& opt, int n_outer) {
  const TracePair tp = hs_trace_pair(d, lambda, critical_couplings(d, opt),
                                     HilbertMethod::pv_subtracted, opt, n_outer);
  return weighted ? tp.weighted : tp.unweighted;
}

// ---- ground-state energy ----

double ground_energy(const SpectralDensity& d, double lambda,
                     const CriticalCouplings& cc, HilbertMethod method,
                     const quad::Options& opt) {
  if (lambda == 0.0) return 0.0;
  if (near_boundary(lambda, cc.lambda_c0))
    throw RegimeError("ground_energy: lambda at the boundary coupling lambda_c0");
  if (lambda < cc.lambda_c0)
    throw RegimeError("ground_energy: H(lambda) is unbounded below");
  const TracePair tp = hs_trace_pair(d, lambda, cc, method, opt);
  return 0.25 * lambda * cc.norm_g_sq.value - tp.weighted;
}

double ground_energy(const SpectralDensity& d, double lambda,
                     const quad::Options& opt) {
  return ground_energy(d, lambda, critical_couplings(d, opt),
                       HilbertMethod::pv_subtracted, opt);
}

// ---- bound state ----

BoundState bound_state(const SpectralDensity& d, double lambda,
                       const CriticalCouplings& cc, const quad::Options& opt) {
  if (!(d.e0() > 0.0))
    throw RegimeError("bound_state: massless density, the interval (lambda_c0, lambda_c) is empty");
  if (near_boundary(lambda, cc.lambda_c) || near_boundary(lambda, cc.lambda_c0))
    throw RegimeError("bound_state: lambda at a critical coupling");
  if (!(lambda > cc.lambda_c0 && lambda < cc.lambda_c))
    throw RegimeError("bound_state: lambda outside (lambda_c0, lambda_c)");

  BoundState bs;
  bs.x0 = find_x0(d, lambda, cc, opt);
  const double e0 = d.e0();
  const double beta_sq = e0 * e0 + bs.x0;
  if (!(beta_sq > 0.0) || !(beta_sq < e0 * e0))
    throw NumericError("bound_state: beta^2 escaped (0, E0^2)", beta_sq, e0 * e0);
  bs.beta = std::sqrt(beta_sq);

  const quad::Options tight = opt.with_rel_tol(std::min(opt.rel_tol, 1e-13));
  bs.d_prime_x0 = eval_D_prime(d, lambda, bs.x0, tight).real();
  const double resolvent_weight = lambda / bs.d_prime_x0;

  const Moment ub = moment(d, Weight::inv_sq_shift, bs.beta, opt);
  bs.ub_norm = std::sqrt(resolvent_weight * ub.value);

  // E_b = beta * ||T_- U_b||^2 through the simplified kernel ...
  auto f_simpl = [&](double mu) {
    const double s = mu + bs.beta;
    return d.psi(mu) / (s * s);
  };
  quad::Result rs = quad::integrate_half_line(f_simpl, e0, opt);
  quad::require_converged(rs, "bound_state: E_b (simplified kernel)");
  const double eb_simpl = resolvent_weight * 0.25 * rs.value;

  // ... cross-checked against the unsimplified T_-^2 diagonal
  auto f_raw = [&](double mu) {
    const double k = std::sqrt(bs.beta / mu) - std::sqrt(mu / bs.beta);
    const double q = mu * mu - beta_sq;
    return 0.25 * k * k * mu * d.psi(mu) / (q * q);
  };
  quad::Result rr = quad::integrate_half_line(f_raw, e0, opt);
  quad::require_converged(rr, "bound_state: E_b (unsimplified kernel)");
  const double eb_raw = bs.beta * resolvent_weight * rr.value;

  if (std::abs(eb_simpl - eb_raw) > 1e-8 * std::max(std::abs(eb_simpl), 1e-12))
    throw NumericError("bound_state: E_b kernel forms disagree", eb_simpl, eb_raw);
  bs.e_b = eb_simpl;
  bs.e_b_err = std::abs(eb_simpl - eb_raw);
  bs.d_x0_resid = std::abs(eval_D_real(d, lambda, bs.x0, tight).real());
  return bs;
}

BoundState bound_state(const SpectralDensity& d, double lambda,
                       const quad::Options& opt) {
  return bound_state(d, lambda, critical_couplings(d, opt), opt);
}

// ---- eta-term shift ----

double shift_Efg(const SpectralDensity& d, const GeneralizedVector& f, double eta,
                 double lambda, const CriticalCouplings& cc,
                 const quad::Options& opt) {
  if (eta == 0.0) return 0.0;
  if (near_boundary(lambda, cc.lambda_c0))
    throw RegimeError("shift_Efg: lambda at lambda_c0 (degenerate denominator)");
  const double kappa = coupling_kappa(d, f, opt).value;
  const double denom = 1.0 + lambda * cc.t_inv_g_sq.value;
  return -0.5 * eta * eta * f.t_inv_half_sq() +
         0.5 * kappa * kappa * eta * eta * lambda / denom;
}

// ---- classification ----

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::supercritical: return "supercritical";
    case Regime::bound: return "bound";
    case Regime::unbounded: return "unbounded";
    case Regime::critical_c: return "critical_c";
    case Regime::critical_c0: return "critical_c0";
  }
  return "?";
}

SpectrumDescription classify(const SpectralDensity& d, double lambda, double eta,
                             const GeneralizedVector* gv, int n_report,
                             HilbertMethod method, const quad::Options& opt) {
  if (eta != 0.0 && gv == nullptr)
    throw InputError("classify: eta != 0 requires a generalized vector f");
  if (n_report < 0) throw InputError("classify: n_report must be >= 0");

  SpectrumDescription out;
  out.lambda = lambda;
  out.eta = eta;
  out.couplings = critical_couplings(d, opt);
  const CriticalCouplings& cc = out.couplings;
  const double e0 = d.e0();

  const bool kappa_known = eta != 0.0 && gv != nullptr;
  bool kappa_zero = true;
  Moment km{0.0, 0.0};
  if (kappa_known) {
    km = coupling_kappa(d, *gv, opt);
    out.kappa = km.value;
    const double scale =
        std::max(1.0, std::sqrt(gv->norm_sq() * cc.norm_g_sq.value));
    kappa_zero = std::abs(km.value) <= 1e-8 * scale;
  }

  if (near_boundary(lambda, cc.lambda_c0)) {
    out.regime = Regime::critical_c0;
    if (eta == 0.0) {
      out.bounded_below = true;
      out.notes = "H(lambda_c0) is bounded below; its spectrum is not classified";
    } else if (!kappa_zero) {
      out.sigma_full_line = true;
      out.bounded_below = false;
      out.notes = "eta != 0, kappa != 0 at lambda_c0: sigma(H) = R, "
                  "pure absence of eigenvalues (sigma_p empty)";
    } else {
      out.shift = -0.5 * eta * eta * gv->t_inv_half_sq();
      out.shift_err = 0.5 * eta * eta * gv->t_inv_half_sq_err();
      out.bounded_below = true;
      std::ostringstream os;
      os << "kappa = 0: unitarily equivalent to the eta = 0 boundary case "
            "shifted by "
         << *out.shift << "; spectrum otherwise not classified";
      out.notes = os.str();
    }
    return out;
  }

  if (near_boundary(lambda, cc.lambda_c)) {
    out.regime = Regime::critical_c;
    out.bounded_below = true;
    out.notes = "boundary coupling lambda_c: spectrum not classified";
    return out;
  }

  if (lambda < cc.lambda_c0) {
    out.regime = Regime::unbounded;
    out.bounded_below = false;
    out.notes = "H(lambda) is unbounded from above and below; no spectral sets reported";
    return out;
  }

  // below here the trace formulas are available
  const TracePair tp = hs_trace_pair(d, lambda, cc, method, opt);
  out.hs_norm_sq = tp.unweighted;
  out.hs_err = tp.err_unweighted;
  const double e_g = 0.25 * lambda * cc.norm_g_sq.value - tp.weighted;
  out.e_g = e_g;
  out.e_g_err =
      tp.err_weighted + 0.25 * std::abs(lambda) * cc.norm_g_sq.abs_err;
  double shift = 0.0;
  if (eta != 0.0) {
    shift = shift_Efg(d, *gv, eta, lambda, cc, opt);
    out.shift = shift;
    const double denom = 1.0 + lambda * cc.t_inv_g_sq.value;
    out.shift_err =
        0.5 * eta * eta * gv->t_inv_half_sq_err() +
        std::abs(km.value * eta * eta * lambda / denom) * km.abs_err;
  }

  if (lambda > cc.lambda_c) {
    out.regime = Regime::supercritical;
    out.e_b = 0.0;
    out.point_spectrum = {e_g + shift};
    out.ac_start = e0 + e_g + shift;
    out.sc_empty = true;
    out.bounded_below = true;
    out.notes = "isolated ground state plus a half-line of absolutely continuous spectrum";
    return out;
  }

  out.regime = Regime::bound;
  const BoundState bs = bound_state(d, lambda, cc, opt);
  out.e_b = bs.e_b;
  out.e_b_err = bs.e_b_err;
  out.beta = bs.beta;
  out.x0 = bs.x0;
  out.x0_resid = bs.d_x0_resid;
  const double base = e_g - bs.e_b + shift;
  for (int n = 0; n <= n_report; ++n)
    out.point_spectrum.push_back(n * bs.beta + base);
  out.ac_start = e0 + base;
  out.sc_empty = true;
  out.bounded_below = true;
  std::ostringstream os;
  const int n_embed = static_cast<int>(std::ceil(e0 / bs.beta));
  os << "eigenvalue ladder with spacing beta continues for all n; entries embed "
        "in the continuous spectrum from n = "
     << n_embed;
  out.notes = os.str();
  return out;
}

// ---- unboundedness witness (closed-form series) ----

namespace {

Moment truncated_moment(const SpectralDensity& d, double lo, int inv_power,
                        const quad::Options& opt) {
  auto f = [&](double mu) {
    double v = d.psi(mu);
    for (int k = 0; k < inv_power; ++k) v /= mu;
    return v;
  };
  quad::Result r = quad::integrate_half_line(f, lo, opt);
  quad::require_converged(r, "witness: truncated moment");
  return {r.value, r.abs_err};
}

double an_ratio(std::uint64_t n) {
  // a_{n-2} / a_n with a_0 = 1, a_n = n^{-3/4} (n!)^{-1/2}
  if (n == 2) return std::pow(2.0, 1.25);
  const double nn = static_cast<double>(n);
  return std::pow(nn / (nn - 2.0), 0.75) * std::sqrt(nn * (nn - 1.0));
}

}  // namespace

WitnessSeries unboundedness_witness(const SpectralDensity& d, double lambda,
                                    double delta, double epsilon,
                                    std::uint64_t n_max, const quad::Options& opt,
                                    double crossing_level) {
  if (!(delta > 0.0)) throw InputError("witness: delta must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InputError("witness: epsilon must lie in (0, 1)");
  if (n_max < 2) throw InputError("witness: n_max must be >= 2");

  WitnessSeries ws;
  ws.lambda = lambda;
  ws.delta = delta;
  ws.epsilon = epsilon;

  const double lo = std::max(d.e0(), delta);
  const Moment q1m = truncated_moment(d, lo, 1, opt);
  const Moment q2m = truncated_moment(d, lo, 2, opt);
  ws.q1 = q1m.value;
  ws.q2 = q2m.value;
  ws.q1_err = q1m.abs_err;
  ws.q2_err = q2m.abs_err;
  if (!(ws.q2 > 0.0))
    throw InputError("witness: delta truncates the density to measure zero");
  const double m_one = moment(d, Weight::one, 0.0, opt).value;
  const double m_inv = moment(d, Weight::inverse, 0.0, opt).value;

  const double w1 = ws.q1 / ws.q2;           // ||T^1/2 f_delta||^2
  const double gf_sq = ws.q1 * ws.q1 / ws.q2;  // <g, f_delta>^2
  const double kc = 0.5 * lambda * (2.0 - epsilon);
  ws.c_lambda = w1 * (1.0 + kc * ws.q1);
  ws.tail_coefficient = w1 * (1.0 + lambda * ws.q1);
  ws.c_lambda_err =
      ws.q1_err * std::abs((1.0 + kc * ws.q1) / ws.q2 + w1 * kc) +
      ws.q2_err * std::abs(ws.c_lambda / ws.q2);
  ws.tail_err =
      ws.q1_err * std::abs((1.0 + lambda * ws.q1) / ws.q2 + w1 * lambda) +
      ws.q2_err * std::abs(ws.tail_coefficient / ws.q2);

  if (m_inv > 0.0 && lambda < -1.0 / m_inv && ws.c_lambda >= 0.0)
    ws.note = "c_lambda >= 0 although lambda < lambda_c0: choose smaller epsilon and delta";

  double num = 0.0, den = 0.0;
  std::uint64_t next_sample = 1;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    const double psin2 = n == 0 ? 1.0 : std::pow(static_cast<double>(n), -1.5);
    den += psin2;
    num += 0.25 * lambda * m_one * psin2;
    if (n == 1) num += w1 + 0.5 * lambda * gf_sq;
    if (n >= 2) {
      num += psin2 * static_cast<double>(n) * ws.c_lambda;
      num += 0.5 * lambda * psin2 *
             (an_ratio(n) - static_cast<double>(n) * (1.0 - epsilon)) * gf_sq;
    }
    if (n == 0) continue;
    const double quot = num / den;
    if (!ws.crossing_n && quot < crossing_level) ws.crossing_n = n;
    if (n == next_sample || n == n_max) {
      ws.rayleigh.push_back({n, quot});
      while (next_sample <= n) next_sample *= 2;
    }
  }

  if (!ws.crossing_n && ws.tail_coefficient < 0.0) {
    const double a_const = num - 2.0 * ws.tail_coefficient * std::sqrt(double(n_max));
    const double z = den + 2.0 / std::sqrt(double(n_max));
    const double root = (crossing_level * z - a_const) / (2.0 * ws.tail_coefficient);
    if (root > 0.0) ws.crossing_estimate = root * root;
  }
  return ws;
}

CScan scan_c_lambda(const SpectralDensity& d, double lambda, int n_delta,
                    int n_epsilon, const quad::Options& opt) {
  if (n_delta < 2 || n_epsilon < 2) throw InputError("scan_c_lambda: grid too small");
  CScan best;
  bool first = true;
  for (int i = 0; i < n_delta; ++i) {
    const double delta = std::pow(10.0, -3.0 + 3.0 * i / (n_delta - 1));
    const double lo = std::max(d.e0(), delta);
    const double q1 = truncated_moment(d, lo, 1, opt).value;
    const double q2 = truncated_moment(d, lo, 2, opt).value;
    if (!(q2 > 0.0)) continue;
    const double w1 = q1 / q2;
    for (int j = 0; j < n_epsilon; ++j) {
      const double eps = 1e-3 + (0.9 - 1e-3) * j / (n_epsilon - 1);
      const double c = w1 * (1.0 + 0.5 * lambda * (2.0 - eps) * q1);
      if (first || c < best.min_c) {
        best = {c, delta, eps};
        first = false;
      }
    }
  }
  if (first) throw InputError("scan_c_lambda: no admissible (delta, epsilon) cell");
  return best;
}

}  // namespace pairspec
