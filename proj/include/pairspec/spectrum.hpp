#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pairspec/density.hpp"
#include "pairspec/dispersion.hpp"

namespace pairspec {

struct TracePair {
  double weighted = 0.0;    // Tr(T^1/2 V* V T^1/2)
  double unweighted = 0.0;  // Tr(V* V)
  double err_weighted = 0.0;
  double err_unweighted = 0.0;
};

// Both Hilbert-Schmidt traces from one pass over a shared boundary-value cache.
TracePair hs_trace_pair(const SpectralDensity& d, double lambda,
                        const CriticalCouplings& cc,
                        HilbertMethod method = HilbertMethod::pv_subtracted,
                        const quad::Options& opt = {}, int n_outer = 400);

double hs_trace_weighted(const SpectralDensity& d, double lambda, bool weighted,
                         const quad::Options& opt = {}, int n_outer = 400);

double ground_energy(const SpectralDensity& d, double lambda,
                     const quad::Options& opt = {});
double ground_energy(const SpectralDensity& d, double lambda,
                     const CriticalCouplings& cc,
                     HilbertMethod method = HilbertMethod::pv_subtracted,
                     const quad::Options& opt = {});

struct BoundState {
  double x0 = 0.0;
  double beta = 0.0;
  double e_b = 0.0;
  double ub_norm = 0.0;     // computed through an independent integral; == 1
  double d_prime_x0 = 0.0;  // D'(x0), diagnostic
  double e_b_err = 0.0;     // gap between the two binding-energy evaluations
  double d_x0_resid = 0.0;  // |D(x0)| after root polishing
};

BoundState bound_state(const SpectralDensity& d, double lambda,
                       const quad::Options& opt = {});
BoundState bound_state(const SpectralDensity& d, double lambda,
                       const CriticalCouplings& cc, const quad::Options& opt = {});

double shift_Efg(const SpectralDensity& d, const GeneralizedVector& f, double eta,
                 double lambda, const CriticalCouplings& cc,
                 const quad::Options& opt = {});

enum class Regime { supercritical, bound, unbounded, critical_c, critical_c0 };
const char* regime_name(Regime r);

struct SpectrumDescription {
  Regime regime;
  double lambda = 0.0;
  double eta = 0.0;
  CriticalCouplings couplings;
  std::optional<double> e_g;
  std::optional<double> e_b;
  std::optional<double> beta;
  std::optional<double> x0;
  std::optional<double> hs_norm_sq;  // Tr(V*V)
  std::optional<double> shift;       // E_{f,g} or the kappa = 0 shift
  std::optional<double> kappa;
  std::optional<double> e_g_err;
  std::optional<double> hs_err;
  std::optional<double> e_b_err;
  std::optional<double> x0_resid;  // |D(x0)|
  std::optional<double> shift_err;
  std::vector<double> point_spectrum;  // ladder (bound) or {E_g + shift}
  std::optional<double> ac_start;
  std::optional<bool> sc_empty;
  std::optional<bool> bounded_below;
  bool sigma_full_line = false;  // sigma = R, sigma_p = empty
  std::string notes;
};

SpectrumDescription classify(const SpectralDensity& d, double lambda, double eta = 0.0,
                             const GeneralizedVector* gv = nullptr, int n_report = 8,
                             HilbertMethod method = HilbertMethod::pv_subtracted,
                             const quad::Options& opt = {});

struct WitnessPoint {
  std::uint64_t n;
  double rayleigh;
};

struct WitnessSeries {
  double lambda = 0.0, delta = 0.0, epsilon = 0.0;
  double q1 = 0.0;  // ||T^-1/2 E((delta,inf)) g||^2
  double q2 = 0.0;  // ||T^-1 E((delta,inf)) g||^2
  double q1_err = 0.0, q2_err = 0.0;
  double c_lambda = 0.0;
  double tail_coefficient = 0.0;  // (q1/q2)(1 + lambda q1): sign decides divergence
  double c_lambda_err = 0.0, tail_err = 0.0;
  std::vector<WitnessPoint> rayleigh;
  std::optional<std::uint64_t> crossing_n;   // first n with quotient < crossing_level
  std::optional<double> crossing_estimate;   // sqrt-extrapolated n, when not reached
  std::string note;
};

WitnessSeries unboundedness_witness(const SpectralDensity& d, double lambda,
                                    double delta, double epsilon,
                                    std::uint64_t n_max,
                                    const quad::Options& opt = {},
                                    double crossing_level = -1e3);

struct CScan {
  double min_c = 0.0;
  double delta_at = 0.0;
  double epsilon_at = 0.0;
};

CScan scan_c_lambda(const SpectralDensity& d, double lambda, int n_delta = 20,
                    int n_epsilon = 20, const quad::Options& opt = {});

}  // namespace pairspec
