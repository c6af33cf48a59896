#include "pairspec/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "pairspec/errors.hpp"

namespace pairspec {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  throw InputError("config error at " + path + ": " + msg);
}

LambdaSpec lambda_from_string(const std::string& s, const std::string& path) {
  if (s == "lambda_c0" || s == "lambda_c" || s == "lambda_T") return {0.0, s};
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (!end || *end != '\0')
    bad(path, "expected a number or one of lambda_c0/lambda_c/lambda_T, got '" + s + "'");
  return {v, ""};
}

std::vector<LambdaSpec> lambdas_from_value(const toml::Value& v,
                                           const std::string& path) {
  std::vector<LambdaSpec> out;
  if (v.is_array()) {
    for (const auto& e : v.as_array(path)) {
      if (e.is_string())
        out.push_back(lambda_from_string(e.as_string(path), path));
      else
        out.push_back({e.as_number(path), ""});
    }
  } else if (v.is_string()) {
    out.push_back(lambda_from_string(v.as_string(path), path));
  } else {
    out.push_back({v.as_number(path), ""});
  }
  if (out.empty()) bad(path, "lambda list is empty");
  return out;
}

std::vector<double> numbers_from(const toml::Table& t, const std::string& sec,
                                 const std::string& key) {
  std::vector<double> out;
  const toml::Value* v = t.find(sec, key);
  if (!v) return out;
  const std::string path = sec + "." + key;
  for (const auto& e : v->as_array(path)) out.push_back(e.as_number(path));
  return out;
}

}  // namespace

std::vector<LambdaSpec> parse_lambda_list(const std::string& csv) {
  std::vector<LambdaSpec> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(lambda_from_string(tok, "--lambda"));
  }
  if (out.empty()) bad("--lambda", "empty list");
  return out;
}

RunConfig config_from_table(const toml::Table& t) {
  RunConfig c;

  c.density.kind = t.string_or("density", "kind", c.density.kind);
  if (c.density.kind != "canon" && c.density.kind != "example210" &&
      c.density.kind != "tabulated")
    bad("density.kind", "must be canon, example210 or tabulated");
  c.density.dim = static_cast<int>(t.int_or("density", "dim", c.density.dim));
  c.density.mass = t.number_or("density", "mass", c.density.mass);
  c.density.file = t.string_or("density", "file", c.density.file);
  c.density.e0 = t.number_or("density", "e0", c.density.e0);
  if (c.density.kind == "tabulated" && c.density.file.empty())
    bad("density.file", "tabulated density needs a file");
  if (t.find("density", "e0")) {
    if (c.density.kind != "tabulated")
      bad("density.e0", "only the tabulated density takes an explicit edge");
    if (c.density.e0 < 0.0) bad("density.e0", "must be >= 0");
  }
  if (c.density.kind == "example210") {
    if (c.density.dim < 1 || c.density.dim > 3) bad("density.dim", "must be 1, 2 or 3");
    if (c.density.mass < 0.0) bad("density.mass", "must be >= 0");
  }

  c.quadrature.rel_tol = t.number_or("quadrature", "rel_tol", c.quadrature.rel_tol);
  if (!(c.quadrature.rel_tol > 0.0)) bad("quadrature.rel_tol", "must be positive");
  c.quadrature.abs_tol = t.number_or("quadrature", "abs_tol", c.quadrature.abs_tol);
  if (!(c.quadrature.abs_tol > 0.0)) bad("quadrature.abs_tol", "must be positive");
  c.quadrature.max_depth =
      static_cast<int>(t.int_or("quadrature", "max_depth", c.quadrature.max_depth));
  if (c.quadrature.max_depth < 4) bad("quadrature.max_depth", "must be >= 4");

  c.dispersion.hilbert_method =
      t.string_or("dispersion", "hilbert_method", c.dispersion.hilbert_method);
  if (c.dispersion.hilbert_method != "pv_subtracted" &&
      c.dispersion.hilbert_method != "poisson_extrapolated")
    bad("dispersion.hilbert_method", "must be pv_subtracted or poisson_extrapolated");
  c.dispersion.s_points =
      static_cast<int>(t.int_or("dispersion", "s_points", c.dispersion.s_points));
  if (c.dispersion.s_points < 2) bad("dispersion.s_points", "must be >= 2");
  c.dispersion.s_min = t.number_or("dispersion", "s_min", c.dispersion.s_min);
  if (c.dispersion.s_min < 0.0) bad("dispersion.s_min", "must be >= 0");
  c.dispersion.s_max = t.number_or("dispersion", "s_max", c.dispersion.s_max);
  if (!(c.dispersion.s_max > c.dispersion.s_min))
    bad("dispersion.s_max", "must exceed dispersion.s_min");

  if (const toml::Value* v = t.find("run", "lambda"))
    c.lambdas = lambdas_from_value(*v, "run.lambda");
  c.eta = t.number_or("run", "eta", c.eta);
  c.n_report = static_cast<int>(t.int_or("run", "n_report", c.n_report));
  if (c.n_report < 0) bad("run.n_report", "must be >= 0");

  c.gv_present = t.has_section("gv");
  if (c.gv_present) {
    c.gv.profile = t.string_or("gv", "profile", c.gv.profile);
    if (c.gv.profile != "sqrt_psi" && c.gv.profile != "sqrt_psi_over_mu" &&
        c.gv.profile != "kappa_zero")
      bad("gv.profile", "must be sqrt_psi, sqrt_psi_over_mu or kappa_zero");
    c.gv.scale = t.number_or("gv", "scale", c.gv.scale);
    if (!(c.gv.scale != 0.0)) bad("gv.scale", "must be nonzero");
  }
  if (c.eta != 0.0 && !c.gv_present)
    bad("run.eta", "nonzero eta requires a [gv] section");

  c.oracle.enabled = t.bool_or("oracle", "enabled", t.has_section("oracle"));
  if (const toml::Value* v = t.find("oracle", "n")) {
    c.oracle.n.clear();
    for (const auto& e : v->as_array("oracle.n"))
      c.oracle.n.push_back(static_cast<int>(e.as_int("oracle.n")));
  }
  if (c.oracle.enabled && c.oracle.n.empty()) bad("oracle.n", "list must be nonempty");
  for (int n : c.oracle.n)
    if (n < 1) bad("oracle.n", "entries must be >= 1");
  c.oracle.rule = t.string_or("oracle", "rule", c.oracle.rule);
  if (c.oracle.rule != "gauss_transformed" && c.oracle.rule != "uniform_log")
    bad("oracle.rule", "must be gauss_transformed or uniform_log");
  c.oracle.n_c = static_cast<int>(t.int_or("oracle", "n_c", c.oracle.n_c));
  if (c.oracle.n_c < 0) bad("oracle.n_c", "must be >= 0");
  c.oracle.k = static_cast<int>(t.int_or("oracle", "k", c.oracle.k));
  if (c.oracle.k < 1) bad("oracle.k", "must be >= 1");
  c.oracle.dim_cap = static_cast<std::size_t>(
      t.int_or("oracle", "dim_cap", static_cast<std::int64_t>(c.oracle.dim_cap)));
  c.oracle.manual_omega = numbers_from(t, "oracle", "manual_omega");
  c.oracle.manual_g = numbers_from(t, "oracle", "manual_g");
  if (c.oracle.manual_omega.size() != c.oracle.manual_g.size())
    bad("oracle.manual_g", "length must match oracle.manual_omega");

  c.witness.enabled = t.bool_or("witness", "enabled", t.has_section("witness"));
  c.witness.delta = t.number_or("witness", "delta", c.witness.delta);
  if (!(c.witness.delta > 0.0)) bad("witness.delta", "must be positive");
  c.witness.epsilon = t.number_or("witness", "epsilon", c.witness.epsilon);
  if (!(c.witness.epsilon > 0.0 && c.witness.epsilon < 1.0))
    bad("witness.epsilon", "must lie in (0, 1)");
  const std::int64_t nmax =
      t.int_or("witness", "n_max", static_cast<std::int64_t>(c.witness.n_max));
  if (nmax < 2) bad("witness.n_max", "must be >= 2");
  c.witness.n_max = static_cast<std::uint64_t>(nmax);

  c.report.out_dir = t.string_or("report", "out_dir", c.report.out_dir);
  c.report.emit_curves = t.bool_or("report", "emit_curves", c.report.emit_curves);
  c.report.emit_witness = t.bool_or("report", "emit_witness", c.report.emit_witness);
  c.report.emit_oracle = t.bool_or("report", "emit_oracle", c.report.emit_oracle);
  c.report.timing = t.bool_or("report", "timing", c.report.timing);

  // reject unknown sections to catch typos early
  for (const auto& [sec, kv] : t.sections) {
    static const char* known[] = {"",        "density", "quadrature", "dispersion",
                                  "run",     "gv",      "oracle",     "witness",
                                  "report"};
    if (std::find(std::begin(known), std::end(known), sec) == std::end(known))
      bad(sec, "unknown section");
    (void)kv;
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  return config_from_table(toml::parse_file(path));
}

}  // namespace pairspec
