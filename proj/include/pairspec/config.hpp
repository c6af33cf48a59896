#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pairspec/quadrature.hpp"
#include "pairspec/toml_lite.hpp"

namespace pairspec {

struct DensityConfig {
  std::string kind = "canon";  // canon | example210 | tabulated
  int dim = 3;                 // example210
  double mass = 0.0;           // example210
  std::string file;            // tabulated CSV: mu,psi per line
  double e0 = -1.0;            // tabulated lower edge; default first sample
};

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_depth = 60;
};

struct DispersionConfig {
  std::string hilbert_method = "pv_subtracted";
  int s_points = 200;
  double s_min = 0.0;
  double s_max = 1000.0;
};

// lambda entries may be symbolic ("lambda_c0", "lambda_c") and are resolved
// against the computed critical couplings
struct LambdaSpec {
  double value = 0.0;
  std::string symbol;  // empty for literal values
};

struct GvConfig {
  std::string profile = "sqrt_psi";  // sqrt_psi | sqrt_psi_over_mu | kappa_zero
  double scale = 1.0;
};

struct OracleConfig {
  bool enabled = false;
  std::vector<int> n = {250, 500, 1000, 2000};
  std::string rule = "gauss_transformed";
  int n_c = 0;  // > 0 enables the truncated-Fock table (manual models)
  int k = 8;
  std::size_t dim_cap = 20000;
  std::vector<double> manual_omega, manual_g;  // bypasses the density
};

struct WitnessConfig {
  bool enabled = false;
  double delta = 0.1;
  double epsilon = 0.1;
  std::uint64_t n_max = 1000000;
};

struct ReportConfig {
  std::string out_dir = "out";
  bool emit_curves = true;
  bool emit_witness = true;
  bool emit_oracle = true;
  bool timing = false;  // timings break byte-identical reports; off by default
};

struct RunConfig {
  DensityConfig density;
  QuadratureConfig quadrature;
  DispersionConfig dispersion;
  std::vector<LambdaSpec> lambdas = {{0.0, ""}};
  double eta = 0.0;
  int n_report = 8;
  bool gv_present = false;
  GvConfig gv;
  OracleConfig oracle;
  WitnessConfig witness;
  ReportConfig report;

  quad::Options quad_options() const {
    quad::Options o;
    o.rel_tol = quadrature.rel_tol;
    o.abs_tol = quadrature.abs_tol;
    o.max_depth = quadrature.max_depth;
    return o;
  }
};

RunConfig config_from_table(const toml::Table& t);
RunConfig load_config(const std::string& path);

// "--lambda 1,-2,lambda_c0" style override
std::vector<LambdaSpec> parse_lambda_list(const std::string& csv);

}  // namespace pairspec
