#pragma once

#include <complex>
#include <optional>

#include "pairspec/density.hpp"
#include "pairspec/quadrature.hpp"

namespace pairspec {

struct DispersionValue {
  std::complex<double> value;
  double abs_err = 0.0;

  double real() const { return value.real(); }
};

struct BoundaryPair {
  double s = 0.0;
  std::complex<double> d_plus;
  std::complex<double> d_minus;
  double hilbert = 0.0;    // (H phi_g)(E0^2 + s)
  double imag_part = 0.0;  // (lambda pi / 2) psi_g(sqrt(E0^2 + s))
  double abs_err = 0.0;
};

struct CriticalCouplings {
  double lambda_c0 = 0.0;
  double lambda_c = 0.0;
  double lambda_T = 0.0;
  // underlying moments, for reports
  Moment norm_g_sq;       // ||g||^2
  Moment t_inv_g_sq;      // ||T^-1/2 g||^2
  Moment t_half_g_sq;     // ||T^1/2 g||^2
  Moment shale_integral;  // int mu psi / (mu^2 - E0^2)
};

enum class HilbertMethod { pv_subtracted, poisson_extrapolated };

const char* hilbert_method_name(HilbertMethod m);
HilbertMethod parse_hilbert_method(const std::string& name);

DispersionValue eval_D(const SpectralDensity& d, double lambda,
                       std::complex<double> z,
                       const quad::Options& opt = {});

// fast path for real z = x on the negative axis (also accepts x = 0 when the
// edge integral converges)
DispersionValue eval_D_real(const SpectralDensity& d, double lambda, double x,
                            const quad::Options& opt = {});

DispersionValue eval_D_prime(const SpectralDensity& d, double lambda, double x,
                             const quad::Options& opt = {});

double hilbert_phi(const SpectralDensity& d, double x,
                   HilbertMethod method = HilbertMethod::pv_subtracted,
                   const quad::Options& opt = {});

BoundaryPair boundary_values(const SpectralDensity& d, double lambda, double s,
                             HilbertMethod method = HilbertMethod::pv_subtracted,
                             const quad::Options& opt = {});

CriticalCouplings critical_couplings(const SpectralDensity& d,
                                     const quad::Options& opt = {});

double find_x0(const SpectralDensity& d, double lambda,
               const quad::Options& opt = {});
double find_x0(const SpectralDensity& d, double lambda,
               const CriticalCouplings& cc, const quad::Options& opt = {});

struct DeltaInf {
  double value = 0.0;
  double s_at = 0.0;
  bool near_zero = false;  // min below 1e-10: grid may straddle a near-critical lambda
};

DeltaInf delta_inf(const SpectralDensity& d, double lambda,
                   HilbertMethod method = HilbertMethod::pv_subtracted,
                   const quad::Options& opt = {}, int grid_points = 512);

// relative closeness used for regime boundaries throughout
inline bool near_boundary(double lambda, double lambda_ref) {
  return std::abs(lambda - lambda_ref) <=
         1e-9 * std::max(std::abs(lambda), std::abs(lambda_ref));
}

}  // namespace pairspec
