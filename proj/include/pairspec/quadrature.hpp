#pragma once

#include <functional>
#include <vector>

namespace pairspec::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;        // absolute floor; relative criterion dominates
  int max_depth = 60;             // bisection depth per initial segment
  std::size_t max_segments = 100000;

  Options with_rel_tol(double t) const {
    Options o = *this;
    o.rel_tol = t;
    return o;
  }
};

struct Result {
  double value = 0.0;
  double abs_err = 0.0;
  bool converged = false;
  bool divergence_suspected = false;  // refinement exhausted at a point
  double worst_at = 0.0;              // abscissa of the stuck segment
  std::size_t n_eval = 0;
};

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod (G7,K15) on [a,b].
Result integrate(const Fn& f, double a, double b, const Options& opt = {});

// Same, honoring interior split points (singularities, peaks).
Result integrate(const Fn& f, double a, double b, const std::vector<double>& splits,
                 const Options& opt = {});

// int_{e0}^inf f(mu) dmu via the compactification mu = e0 + t/(1-t).
Result integrate_half_line(const Fn& f, double e0, const Options& opt = {});

// Half-line with interior split points given in the mu variable.
Result integrate_half_line(const Fn& f, double e0, const std::vector<double>& splits_mu,
                           const Options& opt = {});

// Throws DivergenceError / EvaluationError when `r` did not converge.
void require_converged(const Result& r, const char* what);

// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace pairspec::quad
