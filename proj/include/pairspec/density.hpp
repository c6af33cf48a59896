#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pairspec/quadrature.hpp"

namespace pairspec {

// Spectral density psi_g of the coupling g in the multiplication-operator
// representation: T acts as multiplication by mu on L^2((e0,inf)), and
// psi_g(mu) = |g(mu)|^2 is the sole continuum input.
class SpectralDensity {
 public:
  using Fn = std::function<double(double)>;

  SpectralDensity(Fn psi, double e0, std::string label, Fn psi_prime = {});

  double e0() const { return e0_; }
  const std::string& label() const { return label_; }
  bool has_analytic_prime() const { return static_cast<bool>(prime_); }

  // psi(mu); clamped to 0 at and below e0. Throws EvaluationError on non-finite.
  double psi(double mu) const;
  // dpsi/dmu, analytic when supplied, else central difference with
  // h = max(1e-6, 1e-6*mu).
  double psi_prime(double mu) const;

  // phi_g(u) = psi(sqrt u) for u >= e0^2, else 0 (the Hilbert-transform profile).
  double phi(double u) const;
  double phi_prime(double u) const;

 private:
  Fn fn_;
  Fn prime_;
  double e0_;
  std::string label_;
};

enum class Weight { one, linear, inverse, inv_gap, shale_pair, inv_sq_shift };

const char* weight_name(Weight w);

struct Moment {
  double value = 0.0;
  double abs_err = 0.0;
};

// int psi(mu) w(mu) dmu over (e0, inf). `beta` is used by inv_sq_shift only and
// must lie in (0, e0) there. Throws DivergenceError when the integral diverges.
Moment moment(const SpectralDensity& d, Weight w, double beta = 0.0,
              const quad::Options& opt = {});

// ---- builtin densities ----
SpectralDensity canon_density();
// psi(s) = |S^{d-1}| r^{d-2} v(r)^2 with r = sqrt(s^2 - m^2), e0 = m.
// |S^0| = 2*pi by convention.
SpectralDensity example_density(int dim, double mass, std::function<double(double)> profile);
SpectralDensity example_density(int dim, double mass);  // profile exp(-1/r^2 - r^2)
// Monotone cubic (Fritsch-Carlson) interpolant through (mu_i, psi_i); zero outside.
SpectralDensity tabulated_density(std::vector<double> mu, std::vector<double> psi, double e0);

// ---- admissibility validation ----
struct ValidationCheck {
  std::string name;
  int clause = 0;  // assumption clause the check witnesses
  bool pass = false;
  std::string detail;
  std::optional<double> witness_mu;  // offending abscissa when failing
};

struct ValidationReport {
  std::string density_label;
  double e0 = 0.0;
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
  std::string summary() const;
};

ValidationReport validate_assumptions(const SpectralDensity& d,
                                      const quad::Options& opt = {});

// ---- generalized coupling vector (the eta-term direction f) ----
class GeneralizedVector {
 public:
  using Fn = std::function<double(double)>;
  // Validates finiteness of ||f||^2, ||T^{1/2} f||^2, ||T^{-1/2} f||^2.
  GeneralizedVector(Fn f, double e0, std::string label,
                    const quad::Options& opt = {});

  double operator()(double mu) const { return fn_(mu); }
  double e0() const { return e0_; }
  const std::string& label() const { return label_; }
  double norm_sq() const { return norm_sq_; }
  double t_half_sq() const { return t_half_sq_; }          // int mu f^2
  double t_inv_half_sq() const { return t_inv_half_sq_; }  // int f^2 / mu
  double norm_sq_err() const { return norm_sq_err_; }
  double t_half_sq_err() const { return t_half_sq_err_; }
  double t_inv_half_sq_err() const { return t_inv_half_sq_err_; }

 private:
  Fn fn_;
  double e0_;
  std::string label_;
  double norm_sq_, t_half_sq_, t_inv_half_sq_;
  double norm_sq_err_, t_half_sq_err_, t_inv_half_sq_err_;
};

// kappa = Re<T^{-1} f, g> = int f(mu) sqrt(psi(mu)) / mu dmu.
Moment coupling_kappa(const SpectralDensity& d, const GeneralizedVector& f,
                      const quad::Options& opt = {});

// Sample grid mu_i = e0 + t_i/(1-t_i), t_i = (i+1/2)/n (shared by scans).
std::vector<double> compactified_grid(double e0, int n);

}  // namespace pairspec
