#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "pairspec/density.hpp"

namespace pairspec {

enum class DiscretizeRule { gauss_transformed, uniform_log };
const char* rule_name(DiscretizeRule r);
DiscretizeRule parse_rule(const std::string& name);

struct DiscreteModel {
  Eigen::VectorXd omega;  // ascending mode frequencies
  Eigen::VectorXd g;      // coupling amplitudes
  std::string source;

  double lambda_c0() const;  // -(sum g^2 / omega)^-1
  int n() const { return static_cast<int>(omega.size()); }
};

DiscreteModel discretize(const SpectralDensity& d, int n, DiscretizeRule rule);
DiscreteModel manual_model(std::vector<double> omega, std::vector<double> g);

// nu_j = sqrt(eig(Omega^2 + lambda h h^T)), h = sqrt(omega) g, ascending.
// Computed by a dense solver and cross-checked against the interlacing-bracketed
// secular equation.
Eigen::VectorXd normal_modes(const DiscreteModel& m, double lambda);

double discrete_ground_energy(const DiscreteModel& m, double lambda);

struct BogoliubovPair {
  Eigen::MatrixXd U, V;
  std::array<double, 4> residuals;  // Frobenius defects of the pairing identities
  double frob_v_sq = 0.0;           // ||V||_F^2
  double trace_nu_vtv = 0.0;        // Tr(N^1/2 V^T V N^1/2)
  double trace_omega_vvt = 0.0;     // Tr(Omega^1/2 V V^T Omega^1/2)
};

BogoliubovPair bogoliubov_pair(const DiscreteModel& m, double lambda,
                               bool with_residuals = true);

enum class EigenMethod { automatic, dense, lanczos };

struct FockResult {
  int n_modes = 0;
  int n_c = 0;
  std::size_t dim = 0;
  std::vector<double> eigenvalues;  // lowest k, ascending
  bool cutoff_flag = false;         // lambda below the discrete lambda_c0:
                                    // values are cutoff-dependent, no lower bound
};

std::size_t fock_dimension(int n_modes, int n_c);

FockResult fock_diagonalize(const DiscreteModel& m, double lambda, int n_c,
                            int k = 8, std::size_t dim_cap = 20000,
                            EigenMethod method = EigenMethod::automatic);

}  // namespace pairspec
