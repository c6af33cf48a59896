#include "pairspec/density.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "pairspec/errors.hpp"

namespace pairspec {

// ---- SpectralDensity ----

SpectralDensity::SpectralDensity(Fn psi, double e0, std::string label, Fn psi_prime)
    : fn_(std::move(psi)), prime_(std::move(psi_prime)), e0_(e0),
      label_(std::move(label)) {
  if (!fn_) throw InputError("SpectralDensity: psi callable required");
  if (!(e0_ >= 0.0) || !std::isfinite(e0_))
    throw InputError("SpectralDensity: e0 must be finite and >= 0");
}

double SpectralDensity::psi(double mu) const {
  if (mu <= e0_) return 0.0;
  const double v = fn_(mu);
  if (!std::isfinite(v))
    throw EvaluationError("psi(" + std::to_string(mu) + ") is not finite", mu);
  return v;
}

double SpectralDensity::psi_prime(double mu) const {
  if (mu <= e0_) return 0.0;
  if (prime_) {
    const double v = prime_(mu);
    if (!std::isfinite(v))
      throw EvaluationError("psi_prime(" + std::to_string(mu) + ") is not finite", mu);
    return v;
  }
  const double h = std::max(1e-6, 1e-6 * mu);
  return (psi(mu + h) - psi(mu - h)) / (2.0 * h);
}

double SpectralDensity::phi(double u) const {
  const double lo = e0_ * e0_;
  if (u <= lo) return 0.0;
  return psi(std::sqrt(u));
}

double SpectralDensity::phi_prime(double u) const {
  const double lo = e0_ * e0_;
  if (u <= lo) return 0.0;
  const double s = std::sqrt(u);
  return psi_prime(s) / (2.0 * s);
}

// ---- moments ----

const char* weight_name(Weight w) {
  switch (w) {
    case Weight::one: return "one";
    case Weight::linear: return "linear";
    case Weight::inverse: return "inverse";
    case Weight::inv_gap: return "inv_gap";
    case Weight::shale_pair: return "shale_pair";
    case Weight::inv_sq_shift: return "inv_sq_shift";
  }
  return "?";
}

Moment moment(const SpectralDensity& d, Weight w, double beta,
              const quad::Options& opt) {
  const double e0 = d.e0();
  if (w == Weight::inv_sq_shift) {
    if (!(beta > 0.0) || !(beta < e0))
      throw InputError("moment(inv_sq_shift): beta must lie in (0, e0)");
  }
  auto f = [&d, w, beta, e0](double mu) -> double {
    const double p = d.psi(mu);
    switch (w) {
      case Weight::one: return p;
      case Weight::linear: return mu * p;
      case Weight::inverse: return p / mu;
      case Weight::inv_gap: return p / (mu - e0);
      case Weight::shale_pair:
        return e0 == 0.0 ? p / mu : mu * p / ((mu - e0) * (mu + e0));
      case Weight::inv_sq_shift: {
        const double q = mu * mu - beta * beta;
        return mu * p / (q * q);
      }
    }
    return 0.0;
  };
  quad::Result r = quad::integrate_half_line(f, e0, opt);
  std::string what = std::string("moment(") + weight_name(w) + ", " + d.label() + ")";
  quad::require_converged(r, what.c_str());
  return {r.value, r.abs_err};
}

// ---- builtin densities ----

SpectralDensity canon_density() {
  auto psi = [](double mu) {
    const double t = mu - 1.0;
    return t <= 0.0 ? 0.0 : t * std::exp(-t);
  };
  auto prime = [](double mu) {
    const double t = mu - 1.0;
    return t <= 0.0 ? 0.0 : (1.0 - t) * std::exp(-t);
  };
  return SpectralDensity(psi, 1.0, "canon", prime);
}

SpectralDensity example_density(int dim, double mass,
                                std::function<double(double)> profile) {
  if (dim < 1 || dim > 3) throw InputError("example_density: dim must be 1, 2 or 3");
  if (!(mass >= 0.0)) throw InputError("example_density: mass must be >= 0");
  if (!profile) throw InputError("example_density: profile required");
  // |S^{d-1}|, with the |S^0| = 2*pi convention
  const double surf = dim == 3 ? 4.0 * M_PI : 2.0 * M_PI;
  auto psi = [dim, mass, surf, profile](double s) -> double {
    const double r2 = s * s - mass * mass;
    if (r2 <= 0.0) return 0.0;
    const double r = std::sqrt(r2);
    const double v = profile(r);
    double radial = 1.0;
    if (dim == 1) radial = 1.0 / r;
    else if (dim == 3) radial = r;
    return surf * radial * v * v;
  };
  std::ostringstream label;
  label << "example210(d=" << dim << ",m=" << mass << ")";
  return SpectralDensity(psi, mass, label.str());
}

SpectralDensity example_density(int dim, double mass) {
  return example_density(dim, mass, [](double r) {
    if (r <= 0.0) return 0.0;
    return std::exp(-1.0 / (r * r) - r * r);
  });
}

// ---- tabulated density: Fritsch-Carlson monotone cubic ----

namespace {

struct Pchip {
  std::vector<double> x, y, m;  // nodes, values, node slopes

  double eval(double t) const {
    if (t <= x.front() || t >= x.back()) return 0.0;
    const std::size_t i = seg(t);
    const double h = x[i + 1] - x[i];
    const double s = (t - x[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return y[i] * (2 * s3 - 3 * s2 + 1) + h * m[i] * (s3 - 2 * s2 + s) +
           y[i + 1] * (-2 * s3 + 3 * s2) + h * m[i + 1] * (s3 - s2);
  }

  double deriv(double t) const {
    if (t <= x.front() || t >= x.back()) return 0.0;
    const std::size_t i = seg(t);
    const double h = x[i + 1] - x[i];
    const double s = (t - x[i]) / h;
    const double s2 = s * s;
    return (y[i] * (6 * s2 - 6 * s) + h * m[i] * (3 * s2 - 4 * s + 1) +
            y[i + 1] * (-6 * s2 + 6 * s) + h * m[i + 1] * (3 * s2 - 2 * s)) / h;
  }

  std::size_t seg(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    return std::min(std::max<std::size_t>(i, 1) - 1, x.size() - 2);
  }
};

Pchip make_pchip(std::vector<double> xs, std::vector<double> ys) {
  const std::size_t n = xs.size();
  std::vector<double> h(n - 1), delta(n - 1), m(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = xs[i + 1] - xs[i];
    delta[i] = (ys[i + 1] - ys[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return s;
  };
  if (n == 2) {
    m[0] = m[1] = delta[0];
  } else {
    m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  return Pchip{std::move(xs), std::move(ys), std::move(m)};
}

}  // namespace

SpectralDensity tabulated_density(std::vector<double> mu, std::vector<double> psi,
                                  double e0) {
  if (mu.size() != psi.size() || mu.size() < 2)
    throw InputError("tabulated_density: need >= 2 matching samples");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!std::isfinite(mu[i]) || !std::isfinite(psi[i]))
      throw InputError("tabulated_density: non-finite sample");
    if (psi[i] < 0.0) throw InputError("tabulated_density: psi must be >= 0");
    if (i > 0 && !(mu[i] > mu[i - 1]))
      throw InputError("tabulated_density: mu must be strictly increasing");
    if (mu[i] < e0) throw InputError("tabulated_density: sample below e0");
  }
  auto p = std::make_shared<Pchip>(make_pchip(std::move(mu), std::move(psi)));
  auto f = [p](double t) { return std::max(0.0, p->eval(t)); };
  auto fp = [p](double t) { return p->deriv(t); };
  return SpectralDensity(f, e0, "tabulated", fp);
}

// ---- validation ----

bool ValidationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << density_label << " (e0=" << e0 << "): ";
  int fails = 0;
  for (const auto& c : checks)
    if (!c.pass) ++fails;
  if (fails == 0) {
    os << "all " << checks.size() << " checks pass";
  } else {
    os << fails << "/" << checks.size() << " checks fail:";
    for (const auto& c : checks)
      if (!c.pass) os << " " << c.name;
  }
  return os.str();
}

std::vector<double> compactified_grid(double e0, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    g[i] = e0 + t / (1.0 - t);
  }
  return g;
}

namespace {

ValidationCheck moment_check(const SpectralDensity& d, const std::string& name,
                             int clause, Weight w, const quad::Options& opt) {
  ValidationCheck c{name, clause, false, "", std::nullopt};
  try {
    Moment m = moment(d, w, 0.0, opt);
    c.pass = true;
    std::ostringstream os;
    os << "= " << m.value << " (abs_err " << m.abs_err << ")";
    c.detail = os.str();
  } catch (const DivergenceError& e) {
    c.detail = e.what();
  } catch (const EvaluationError& e) {
    c.detail = e.what();
    if (e.has_where) c.witness_mu = e.where;
  }
  return c;
}

// Trend test along samples ordered toward the limit point: values must be
// below `tol` at the last sample and non-increasing along the way.
ValidationCheck limit_check(const std::string& name, int clause,
                            const std::vector<double>& abscissae,
                            const std::vector<double>& vals, double tol) {
  ValidationCheck c{name, clause, true, "", std::nullopt};
  std::ostringstream os;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) os << " ";
    os << vals[i];
  }
  c.detail = os.str();
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    if (vals[i + 1] > vals[i] * (1.0 + 1e-9) + 1e-300) {
      c.pass = false;
      c.witness_mu = abscissae[i + 1];
      c.detail += " (not decreasing)";
      return c;
    }
  }
  if (!(vals.back() < tol)) {
    c.pass = false;
    c.witness_mu = abscissae.back();
    c.detail += " (limit sample above tolerance)";
  }
  return c;
}

}  // namespace

ValidationReport validate_assumptions(const SpectralDensity& d,
                                      const quad::Options& opt) {
  ValidationReport rep;
  rep.density_label = d.label();
  rep.e0 = d.e0();
  const double e0 = d.e0();

  rep.checks.push_back({"spectral_representation", 1, true,
                        "multiplication-operator form fixed by construction",
                        std::nullopt});

  rep.checks.push_back(moment_check(d, "moment_norm", 2, Weight::one, opt));
  rep.checks.push_back(moment_check(d, "moment_inv_gap", 2, Weight::inv_gap, opt));
  rep.checks.push_back(moment_check(d, "moment_linear", 2, Weight::linear, opt));

  // positivity on a compactified sample grid. Exact zeros are tolerated only
  // where the neighbouring positive sample is already far below any scale the
  // library can resolve (the density plainly decayed out of double range), or
  // at isolated points; a zero run next to a value of ordinary size is a
  // genuine support gap.
  {
    ValidationCheck c{"positivity", 3, true, "psi > 0 on 512-point grid", std::nullopt};
    const double underflow_scale = 1e-120;
    const std::vector<double> grid = compactified_grid(e0, 512);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size() && c.pass; ++i) {
      try {
        vals[i] = d.psi(grid[i]);
      } catch (const EvaluationError& e) {
        c.pass = false;
        c.witness_mu = e.has_where ? e.where : grid[i];
        c.detail = e.what();
      }
      if (c.pass && vals[i] < 0.0) {
        c.pass = false;
        c.witness_mu = grid[i];
        c.detail = "psi(" + std::to_string(grid[i]) + ") < 0";
      }
    }
    if (c.pass) {
      std::size_t i = 0;
      const std::size_t n = grid.size();
      bool any_positive = false;
      while (i < n) {
        if (vals[i] > 0.0) {
          any_positive = true;
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < n && vals[j] == 0.0) ++j;  // zero run [i, j)
        bool ok = j - i == 1 && i > 0 && j < n;  // isolated zeros are measure zero
        if (!ok)
          ok = (i == 0 || vals[i - 1] < underflow_scale) &&
               (j == n || vals[j] < underflow_scale);
        if (!ok) {
          c.pass = false;
          c.witness_mu = grid[i];
          c.detail = "psi vanishes on [" + std::to_string(grid[i]) + ", " +
                     std::to_string(grid[j - 1]) + "]";
          break;
        }
        i = j;
      }
      if (c.pass && !any_positive) {
        c.pass = false;
        c.detail = "psi vanishes on the whole sample grid";
      }
    }
    rep.checks.push_back(c);
  }

  // boundedness of x * psi at infinity: samples mu = 10^k, k = 2..6
  {
    std::vector<double> xs, vs;
    for (int k = 2; k <= 6; ++k) {
      const double mu = std::pow(10.0, k);
      xs.push_back(mu);
      vs.push_back(mu * d.psi(mu));
    }
    ValidationCheck c{"bounded_mu_psi", 3, true, "", std::nullopt};
    bool growing = true;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i)
      if (vs[i + 1] <= vs[i] * 1.5 + 1e-300) growing = false;
    if (growing && vs.back() > 10.0 * (vs.front() + 1e-300)) {
      c.pass = false;
      c.witness_mu = xs.back();
      c.detail = "mu*psi grows along tail samples";
    } else {
      std::ostringstream os;
      os << "tail samples " << vs.front() << " .. " << vs.back();
      c.detail = os.str();
    }
    rep.checks.push_back(c);
  }

  // boundedness of psi / x toward the lower edge: mu = e0 + 10^-k, k = 4..8
  {
    std::vector<double> xs, vs;
    for (int k = 4; k <= 8; ++k) {
      const double mu = e0 + std::pow(10.0, -k);
      xs.push_back(mu);
      vs.push_back(d.psi(mu) / mu);
    }
    ValidationCheck c{"bounded_psi_over_mu", 3, true, "", std::nullopt};
    bool growing = true;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i)
      if (vs[i + 1] <= vs[i] * 1.5 + 1e-300) growing = false;
    if (growing && vs.back() > 10.0 * (vs.front() + 1e-300)) {
      c.pass = false;
      c.witness_mu = xs.back();
      c.detail = "psi/mu grows toward the edge";
    } else {
      std::ostringstream os;
      os << "edge samples " << vs.front() << " .. " << vs.back();
      c.detail = os.str();
    }
    rep.checks.push_back(c);
  }

  // C1 limit x^{-1} psi'(x) -> 0 at the lower edge and at infinity
  {
    std::vector<double> xs, vs;
    for (int k = 4; k <= 8; ++k) {
      const double mu = e0 + std::pow(10.0, -k);
      xs.push_back(mu);
      vs.push_back(std::abs(d.psi_prime(mu)) / mu);
    }
    rep.checks.push_back(limit_check("c1_limit_edge", 4, xs, vs, 1e-4));
  }
  {
    std::vector<double> xs, vs;
    for (int k = 2; k <= 6; ++k) {
      const double mu = std::pow(10.0, k);
      xs.push_back(mu);
      vs.push_back(std::abs(d.psi_prime(mu)) / mu);
    }
    rep.checks.push_back(limit_check("c1_limit_infinity", 4, xs, vs, 1e-4));
  }

  return rep;
}

// ---- GeneralizedVector ----

GeneralizedVector::GeneralizedVector(Fn f, double e0, std::string label,
                                     const quad::Options& opt)
    : fn_(std::move(f)), e0_(e0), label_(std::move(label)) {
  if (!fn_) throw InputError("GeneralizedVector: callable required");
  auto checked = [this](double mu) {
    const double v = fn_(mu);
    if (!std::isfinite(v))
      throw EvaluationError("f(" + std::to_string(mu) + ") is not finite", mu);
    return v;
  };
  auto integ = [&](quad::Fn g, const char* what, double* err) {
    quad::Result r = quad::integrate_half_line(g, e0_, opt);
    quad::require_converged(r, what);
    *err = r.abs_err;
    return r.value;
  };
  norm_sq_ = integ([&](double mu) { double v = checked(mu); return v * v; },
                   "GeneralizedVector ||f||^2", &norm_sq_err_);
  t_half_sq_ = integ([&](double mu) { double v = checked(mu); return mu * v * v; },
                     "GeneralizedVector ||T^1/2 f||^2", &t_half_sq_err_);
  t_inv_half_sq_ = integ([&](double mu) { double v = checked(mu); return v * v / mu; },
                         "GeneralizedVector ||T^-1/2 f||^2", &t_inv_half_sq_err_);
}

Moment coupling_kappa(const SpectralDensity& d, const GeneralizedVector& f,
                      const quad::Options& opt) {
  const double lo = std::max(d.e0(), f.e0());
  // kappa may vanish by cancellation; converge relative to the magnitude
  // integral, not the (possibly zero) signed value
  auto mag = [&](double mu) {
    return std::abs(f(mu)) * std::sqrt(d.psi(mu)) / mu;
  };
  quad::Result rm = quad::integrate_half_line(mag, lo, opt);
  quad::require_converged(rm, "coupling_kappa magnitude");
  auto g = [&](double mu) { return f(mu) * std::sqrt(d.psi(mu)) / mu; };
  quad::Options o2 = opt;
  o2.abs_tol = std::max(opt.abs_tol, opt.rel_tol * std::max(rm.value, 1e-300));
  quad::Result r = quad::integrate_half_line(g, lo, o2);
  quad::require_converged(r, "coupling_kappa");
  return {r.value, r.abs_err};
}

}  // namespace pairspec
