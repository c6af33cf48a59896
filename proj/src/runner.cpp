#include "pairspec/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "pairspec/errors.hpp"
#include "pairspec/fock.hpp"

namespace pairspec::run {

namespace {

namespace fs = std::filesystem;

constexpr int kResidualCutoffN = 600;  // Bogoliubov residuals are O(N^3)

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double value, double abs_err) {
  return json{{"value", value}, {"abs_err", abs_err}};
}

json jnum(const Moment& m) { return jnum(m.value, m.abs_err); }

const char* error_kind(const Error& e) {
  if (dynamic_cast<const InputError*>(&e)) return "input";
  if (dynamic_cast<const DivergenceError*>(&e)) return "divergence";
  if (dynamic_cast<const RegimeError*>(&e)) return "regime";
  if (dynamic_cast<const NumericError*>(&e)) return "numeric";
  if (dynamic_cast<const EvaluationError*>(&e)) return "evaluation";
  return "error";
}

json error_json(const Error& e) {
  return json{{"type", error_kind(e)}, {"message", e.what()}};
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

json config_echo(const RunConfig& c) {
  json e;
  json den{{"kind", c.density.kind}};
  if (c.density.kind == "example210") {
    den["dim"] = c.density.dim;
    den["mass"] = c.density.mass;
  }
  if (c.density.kind == "tabulated") {
    den["file"] = c.density.file;
    if (c.density.e0 >= 0.0) den["e0"] = c.density.e0;
  }
  e["density"] = den;
  e["quadrature"] = {{"rel_tol", c.quadrature.rel_tol},
                     {"abs_tol", c.quadrature.abs_tol},
                     {"max_depth", c.quadrature.max_depth}};
  e["dispersion"] = {{"hilbert_method", c.dispersion.hilbert_method},
                     {"s_points", c.dispersion.s_points},
                     {"s_min", c.dispersion.s_min},
                     {"s_max", c.dispersion.s_max}};
  json lams = json::array();
  for (const auto& ls : c.lambdas) {
    if (ls.symbol.empty())
      lams.push_back(ls.value);
    else
      lams.push_back(ls.symbol);
  }
  e["run"] = {{"lambda", lams}, {"eta", c.eta}, {"n_report", c.n_report}};
  if (c.gv_present)
    e["gv"] = {{"profile", c.gv.profile}, {"scale", c.gv.scale}};
  if (c.oracle.enabled) {
    json o{{"n", c.oracle.n}, {"rule", c.oracle.rule}, {"n_c", c.oracle.n_c},
           {"k", c.oracle.k}};
    if (!c.oracle.manual_omega.empty()) {
      o["manual_omega"] = c.oracle.manual_omega;
      o["manual_g"] = c.oracle.manual_g;
    }
    e["oracle"] = o;
  }
  if (c.witness.enabled)
    e["witness"] = {{"delta", c.witness.delta},
                    {"epsilon", c.witness.epsilon},
                    {"n_max", c.witness.n_max}};
  e["report"] = {{"out_dir", c.report.out_dir},
                 {"emit_curves", c.report.emit_curves},
                 {"emit_witness", c.report.emit_witness},
                 {"emit_oracle", c.report.emit_oracle},
                 {"timing", c.report.timing}};
  return e;
}

std::vector<double> s_grid(const DispersionConfig& dc) {
  const int n = std::max(2, dc.s_points);
  std::vector<double> s(n);
  if (dc.s_min > 0.0) {
    const double r = std::log(dc.s_max / dc.s_min);
    for (int i = 0; i < n; ++i)
      s[i] = dc.s_min * std::exp(r * i / (n - 1));
  } else {
    // cubic clustering keeps resolution near the band edge
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / (n - 1);
      s[i] = dc.s_max * t * t * t;
    }
  }
  return s;
}

struct Outcome {
  LambdaSpec ls;
  std::optional<SpectrumDescription> sd;
  json error;
};

json lambda_head(const LambdaSpec& ls, double eta) {
  json r;
  r["lambda"] = ls.value;
  if (!ls.symbol.empty()) r["lambda_symbol"] = ls.symbol;
  r["eta"] = eta;
  return r;
}

}  // namespace

const char* scope_name(Scope s) {
  switch (s) {
    case Scope::validate: return "validate";
    case Scope::dispersion: return "dispersion";
    case Scope::oracle: return "oracle";
    case Scope::witness: return "witness";
    case Scope::analyze: return "analyze";
  }
  return "?";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw InputError("write to '" + path + "' failed");
}

SpectralDensity make_density(const DensityConfig& dc) {
  if (dc.kind == "canon") return canon_density();
  if (dc.kind == "example210") return example_density(dc.dim, dc.mass);
  if (dc.kind == "tabulated") {
    std::ifstream f(dc.file);
    if (!f) throw InputError("config error at density.file: cannot open '" +
                             dc.file + "'");
    std::vector<double> mu, psi;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      const std::size_t h = line.find('#');
      if (h != std::string::npos) line.erase(h);
      for (char& ch : line)
        if (ch == ',' || ch == '\t' || ch == '\r') ch = ' ';
      std::istringstream ss(line);
      double a, b;
      if (!(ss >> a)) continue;  // blank or header line
      if (!(ss >> b))
        throw InputError("config error at density.file: line " +
                         std::to_string(lineno) + " of '" + dc.file +
                         "' has no psi column");
      mu.push_back(a);
      psi.push_back(b);
    }
    if (mu.size() < 2)
      throw InputError("config error at density.file: '" + dc.file +
                       "' holds fewer than two samples");
    const double e0 = dc.e0 >= 0.0 ? dc.e0 : mu.front();
    return tabulated_density(std::move(mu), std::move(psi), e0);
  }
  throw InputError("config error at density.kind: unknown kind '" + dc.kind + "'");
}

GeneralizedVector make_gv(const GvConfig& gc, const SpectralDensity& d,
                          const quad::Options& opt) {
  const double sc = gc.scale;
  if (gc.profile == "sqrt_psi")
    return GeneralizedVector(
        [dd = d, sc](double mu) { return sc * std::sqrt(dd.psi(mu)); }, d.e0(),
        "sqrt_psi", opt);
  if (gc.profile == "sqrt_psi_over_mu")
    return GeneralizedVector(
        [dd = d, sc](double mu) { return sc * std::sqrt(dd.psi(mu)) / mu; },
        d.e0(), "sqrt_psi_over_mu", opt);
  if (gc.profile == "kappa_zero") {
    // f = sqrt(psi) (mu - c) with c chosen so that int f sqrt(psi)/mu = 0
    const double c = moment(d, Weight::one, 0.0, opt).value /
                     moment(d, Weight::inverse, 0.0, opt).value;
    return GeneralizedVector(
        [dd = d, sc, c](double mu) {
          return sc * std::sqrt(dd.psi(mu)) * (mu - c);
        },
        d.e0(), "kappa_zero", opt);
  }
  throw InputError("config error at gv.profile: unknown profile '" +
                   gc.profile + "'");
}

std::vector<LambdaSpec> resolve_lambdas(const std::vector<LambdaSpec>& in,
                                        const CriticalCouplings& cc) {
  std::vector<LambdaSpec> out;
  out.reserve(in.size());
  for (LambdaSpec ls : in) {
    if (ls.symbol == "lambda_c0")
      ls.value = cc.lambda_c0;
    else if (ls.symbol == "lambda_c")
      ls.value = cc.lambda_c;
    else if (ls.symbol == "lambda_T")
      ls.value = cc.lambda_T;
    else if (!ls.symbol.empty())
      throw InputError("unknown lambda symbol '" + ls.symbol + "'");
    out.push_back(ls);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LambdaSpec& a, const LambdaSpec& b) {
                     return a.value < b.value;
                   });
  return out;
}

json validation_json(const ValidationReport& rep) {
  json v;
  v["density"] = rep.density_label;
  v["e0"] = rep.e0;
  v["all_pass"] = rep.all_pass();
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json e{{"name", c.name}, {"clause", c.clause}, {"pass", c.pass},
           {"detail", c.detail}};
    if (c.witness_mu) e["witness_mu"] = *c.witness_mu;
    checks.push_back(e);
  }
  v["checks"] = checks;
  return v;
}

json couplings_json(const CriticalCouplings& cc, double e0) {
  const Moment& mi = cc.t_inv_g_sq;
  const Moment& ml = cc.t_half_g_sq;
  const Moment& ms = cc.shale_integral;
  const double c0_err = mi.value > 0.0 ? mi.abs_err / (mi.value * mi.value) : 0.0;
  const double c_err = ms.value > 0.0 ? ms.abs_err / (ms.value * ms.value) : 0.0;
  // lambda_T = 1/f with f = a + sqrt(a b)
  const double a = mi.value, b = ml.value;
  const double f = a + std::sqrt(a * b);
  const double df = mi.abs_err * (1.0 + 0.5 * std::sqrt(b / a)) +
                    ml.abs_err * 0.5 * std::sqrt(a / b);
  json c;
  c["lambda_c0"] = jnum(cc.lambda_c0, c0_err);
  c["lambda_c"] = jnum(cc.lambda_c, c_err);
  c["lambda_T"] = jnum(cc.lambda_T, df / (f * f));
  c["norm_g_sq"] = jnum(cc.norm_g_sq);
  c["t_inv_g_sq"] = jnum(cc.t_inv_g_sq);
  c["t_half_g_sq"] = jnum(cc.t_half_g_sq);
  c["shale_integral"] = jnum(cc.shale_integral);
  c["bound_interval_nonempty"] = e0 > 0.0 && cc.lambda_c0 < cc.lambda_c;
  return c;
}

json result_json(const SpectrumDescription& sd) {
  json r;
  r["regime"] = regime_name(sd.regime);
  if (sd.kappa) r["kappa"] = *sd.kappa;
  if (sd.e_g) r["e_g"] = jnum(*sd.e_g, sd.e_g_err.value_or(0.0));
  if (sd.e_b) r["e_b"] = jnum(*sd.e_b, sd.e_b_err.value_or(0.0));
  if (sd.beta)
    r["beta"] = jnum(*sd.beta, sd.x0_resid ? std::sqrt(*sd.x0_resid) : 0.0);
  if (sd.x0) r["x0"] = jnum(*sd.x0, sd.x0_resid.value_or(0.0));
  if (sd.hs_norm_sq) r["hs_norm_sq"] = jnum(*sd.hs_norm_sq, sd.hs_err.value_or(0.0));
  if (sd.shift) r["shift"] = jnum(*sd.shift, sd.shift_err.value_or(0.0));
  if (!sd.point_spectrum.empty()) {
    r["point_spectrum"] = sd.point_spectrum;
    r["point_spectrum_err"] =
        sd.e_g_err.value_or(0.0) + sd.e_b_err.value_or(0.0);
  }
  if (sd.ac_start)
    r["ac_start"] = jnum(*sd.ac_start,
                         sd.e_g_err.value_or(0.0) + sd.e_b_err.value_or(0.0));
  if (sd.sc_empty) r["sc_empty"] = *sd.sc_empty;
  if (sd.bounded_below) r["bounded_below"] = *sd.bounded_below;
  r["sigma_full_line"] = sd.sigma_full_line;
  r["notes"] = sd.notes;
  return r;
}

json witness_json(const WitnessSeries& ws) {
  json w;
  w["delta"] = ws.delta;
  w["epsilon"] = ws.epsilon;
  w["q1"] = jnum(ws.q1, ws.q1_err);
  w["q2"] = jnum(ws.q2, ws.q2_err);
  w["c_lambda"] = jnum(ws.c_lambda, ws.c_lambda_err);
  w["tail_coefficient"] = jnum(ws.tail_coefficient, ws.tail_err);
  w["n_max"] = ws.rayleigh.empty() ? 0 : ws.rayleigh.back().n;
  if (!ws.rayleigh.empty())
    w["rayleigh_at_n_max"] = ws.rayleigh.back().rayleigh;
  if (ws.crossing_n) w["crossing_n"] = *ws.crossing_n;
  if (ws.crossing_estimate) w["crossing_estimate"] = *ws.crossing_estimate;
  if (!ws.note.empty()) w["note"] = ws.note;
  return w;
}

namespace {

std::string dispersion_csv_text(const SpectralDensity& d, double lambda,
                                const DispersionConfig& dc, HilbertMethod method,
                                const quad::Options& opt, int* bad_points) {
  std::ostringstream os;
  os << "s,re_d,im_d_plus,hilbert_phi,abs_err\n";
  int bad = 0;
  for (double s : s_grid(dc)) {
    os << fmt17(s) << ',';
    try {
      const BoundaryPair bp = boundary_values(d, lambda, s, method, opt);
      os << fmt17(bp.d_plus.real()) << ',' << fmt17(bp.imag_part) << ','
         << fmt17(bp.hilbert) << ',' << fmt17(bp.abs_err) << '\n';
    } catch (const Error&) {
      ++bad;
      os << "nan,nan,nan,nan\n";
    }
  }
  *bad_points = bad;
  return os.str();
}

std::string witness_csv_text(const WitnessSeries& ws) {
  std::ostringstream os;
  os << "n,rayleigh\n";
  for (const auto& p : ws.rayleigh)
    os << p.n << ',' << fmt17(p.rayleigh) << '\n';
  return os.str();
}

std::string spectrum_csv_text(const CriticalCouplings& cc,
                              const std::vector<Outcome>& outs) {
  std::ostringstream os;
  os << "lambda,kind,index,value\n";
  os << fmt17(cc.lambda_c0) << ",lambda_c0,0," << fmt17(cc.lambda_c0) << '\n';
  os << fmt17(cc.lambda_c) << ",lambda_c,0," << fmt17(cc.lambda_c) << '\n';
  os << fmt17(cc.lambda_T) << ",lambda_T,0," << fmt17(cc.lambda_T) << '\n';
  for (const auto& o : outs) {
    if (!o.sd) continue;
    const std::string l = fmt17(o.ls.value);
    for (std::size_t i = 0; i < o.sd->point_spectrum.size(); ++i)
      os << l << ",point," << i << ',' << fmt17(o.sd->point_spectrum[i]) << '\n';
    if (o.sd->ac_start)
      os << l << ",ac_start,0," << fmt17(*o.sd->ac_start) << '\n';
  }
  return os.str();
}

}  // namespace

json run_scoped(const RunConfig& cfg, Scope scope, bool write_files) {
  const quad::Options opt = cfg.quad_options();
  const HilbertMethod hm = parse_hilbert_method(cfg.dispersion.hilbert_method);
  const std::string& out_dir = cfg.report.out_dir;
  const Stopwatch total;
  json timing;

  json rep;
  rep["schema_version"] = 1;
  rep["generator"] = "pairspec 1.0.0";
  rep["mode"] = scope_name(scope);
  rep["config"] = config_echo(cfg);

  const bool manual_oracle = !cfg.oracle.manual_omega.empty();
  const bool need_density = !(scope == Scope::oracle && manual_oracle);

  if (write_files && scope != Scope::validate) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
      throw InputError("cannot create output directory '" + out_dir +
                       "': " + ec.message());
  }

  std::optional<SpectralDensity> den;
  if (need_density) den.emplace(make_density(cfg.density));

  if (den) {
    rep["density"] = {{"label", den->label()}, {"e0", den->e0()}};
    const Stopwatch sw;
    rep["validation"] = validation_json(validate_assumptions(*den, opt));
    timing["validation_ms"] = sw.ms();
  }

  json files = json::array();

  if (scope != Scope::validate) {
    std::optional<CriticalCouplings> cc;
    std::vector<LambdaSpec> lams = cfg.lambdas;
    if (den) {
      const Stopwatch sw;
      cc = critical_couplings(*den, opt);
      rep["couplings"] = couplings_json(*cc, den->e0());
      lams = resolve_lambdas(lams, *cc);
      timing["couplings_ms"] = sw.ms();
    } else {
      for (const auto& ls : lams)
        if (!ls.symbol.empty())
          throw InputError("symbolic lambda '" + ls.symbol +
                           "' needs a density, not a manual oracle model");
      std::stable_sort(lams.begin(), lams.end(),
                       [](const LambdaSpec& a, const LambdaSpec& b) {
                         return a.value < b.value;
                       });
    }

    std::optional<GeneralizedVector> gv;
    if (den && cfg.gv_present) gv.emplace(make_gv(cfg.gv, *den, opt));

    // continuum classification drives both the results table and the oracle
    // reference column
    std::vector<Outcome> outs;
    const bool need_outcomes =
        scope == Scope::analyze || (scope == Scope::oracle && den);
    if (need_outcomes) {
      const Stopwatch sw;
      for (const auto& ls : lams) {
        Outcome o{ls, std::nullopt, json()};
        try {
          o.sd = classify(*den, ls.value, cfg.eta, gv ? &*gv : nullptr,
                          cfg.n_report, hm, opt);
        } catch (const Error& e) {
          o.error = error_json(e);
        }
        outs.push_back(std::move(o));
      }
      timing["classify_ms"] = sw.ms();
    }

    if (scope == Scope::analyze) {
      json results = json::array();
      for (const auto& o : outs) {
        json r = lambda_head(o.ls, cfg.eta);
        if (o.sd) {
          const json body = result_json(*o.sd);
          for (auto it = body.begin(); it != body.end(); ++it) r[it.key()] = *it;
        } else {
          r["error"] = o.error;
        }
        results.push_back(r);
      }
      rep["results"] = results;
    }

    const bool do_curves =
        den && (scope == Scope::dispersion ||
                (scope == Scope::analyze && cfg.report.emit_curves));
    if (do_curves) {
      const Stopwatch sw;
      json darr = json::array();
      for (std::size_t i = 0; i < lams.size(); ++i) {
        json e = lambda_head(lams[i], cfg.eta);
        if (write_files) {
          int bad = 0;
          const std::string name = "dpm_" + std::to_string(i) + ".csv";
          write_text_file(out_dir + "/" + name,
                          dispersion_csv_text(*den, lams[i].value,
                                              cfg.dispersion, hm, opt, &bad));
          e["file"] = name;
          if (bad > 0) e["bad_points"] = bad;
          files.push_back(json{{"name", name},
                               {"kind", "dispersion_boundary"},
                               {"lambda", lams[i].value}});
        }
        try {
          const DeltaInf di = delta_inf(*den, lams[i].value, hm, opt);
          e["delta_inf"] =
              json{{"value", di.value}, {"s_at", di.s_at},
                   {"near_zero", di.near_zero}};
        } catch (const Error& ex) {
          e["delta_inf_error"] = error_json(ex);
        }
        darr.push_back(e);
      }
      rep["dispersion"] = darr;
      timing["dispersion_ms"] = sw.ms();
    }

    if (scope == Scope::analyze && write_files && cfg.report.emit_curves && cc) {
      const std::string name = "spectrum.csv";
      write_text_file(out_dir + "/" + name, spectrum_csv_text(*cc, outs));
      files.push_back(json{{"name", name}, {"kind", "spectrum"}});
    }

    const bool do_witness =
        den && (scope == Scope::witness ||
                (scope == Scope::analyze && cfg.witness.enabled));
    if (do_witness) {
      const Stopwatch sw;
      json warr = json::array();
      for (std::size_t i = 0; i < lams.size(); ++i) {
        json w = lambda_head(lams[i], cfg.eta);
        try {
          const WitnessSeries ws = unboundedness_witness(
              *den, lams[i].value, cfg.witness.delta, cfg.witness.epsilon,
              cfg.witness.n_max, opt);
          const json body = witness_json(ws);
          for (auto it = body.begin(); it != body.end(); ++it) w[it.key()] = *it;
          const CScan cs = scan_c_lambda(*den, lams[i].value, 20, 20, opt);
          w["c_scan"] = json{{"min_c", cs.min_c}, {"delta_at", cs.delta_at},
                             {"epsilon_at", cs.epsilon_at}};
          if (write_files &&
              (scope == Scope::witness || cfg.report.emit_witness)) {
            const std::string name = "witness_" + std::to_string(i) + ".csv";
            write_text_file(out_dir + "/" + name, witness_csv_text(ws));
            w["file"] = name;
            files.push_back(json{{"name", name}, {"kind", "witness"},
                                 {"lambda", lams[i].value}});
          }
        } catch (const Error& e) {
          w["error"] = error_json(e);
        }
        warr.push_back(w);
      }
      rep["witness"] = warr;
      timing["witness_ms"] = sw.ms();
    }

    const bool do_oracle =
        scope == Scope::oracle ||
        (scope == Scope::analyze && cfg.oracle.enabled &&
         cfg.report.emit_oracle);
    if (do_oracle) {
      const Stopwatch sw;
      json orc;
      orc["rule"] = cfg.oracle.rule;
      orc["residual_cutoff_n"] = kResidualCutoffN;
      std::vector<DiscreteModel> models;
      if (manual_oracle) {
        models.push_back(manual_model(cfg.oracle.manual_omega, cfg.oracle.manual_g));
      } else {
        if (!den)
          throw InputError("oracle without a manual model needs a density");
        for (int n : cfg.oracle.n)
          models.push_back(discretize(*den, n, parse_rule(cfg.oracle.rule)));
      }
      json rows = json::array();
      std::ostringstream csv;
      csv << "n,lambda,e_disc,nu_min,max_residual,frob_v_sq,reference,rel_err\n";
      for (const auto& m : models) {
        for (std::size_t li = 0; li < lams.size(); ++li) {
          const double lam = lams[li].value;
          json row;
          row["n"] = m.n();
          row["lambda"] = lam;
          if (!lams[li].symbol.empty()) row["lambda_symbol"] = lams[li].symbol;
          row["lambda_c0_disc"] = m.lambda_c0();
          std::string c_e = "nan", c_nu = "nan", c_res = "", c_fv = "",
                      c_ref = "", c_rel = "";
          try {
            const Eigen::VectorXd nu = normal_modes(m, lam);
            const double e_disc = 0.5 * (nu.sum() - m.omega.sum());
            row["e_disc"] = e_disc;
            row["nu_min"] = nu(0);
            c_e = fmt17(e_disc);
            c_nu = fmt17(nu(0));
            if (m.n() <= kResidualCutoffN) {
              const BogoliubovPair bp = bogoliubov_pair(m, lam, true);
              const double mr = *std::max_element(bp.residuals.begin(),
                                                  bp.residuals.end());
              row["max_residual"] = mr;
              row["frob_v_sq"] = bp.frob_v_sq;
              row["trace_nu_vtv"] = bp.trace_nu_vtv;
              c_res = fmt17(mr);
              c_fv = fmt17(bp.frob_v_sq);
            }
            if (manual_oracle) {
              row["nu"] = std::vector<double>(nu.data(), nu.data() + nu.size());
            }
            if (li < outs.size() && outs[li].sd && outs[li].sd->e_g) {
              const SpectrumDescription& sd = *outs[li].sd;
              const double ref = *sd.e_g - sd.e_b.value_or(0.0);
              const double rel =
                  std::abs(e_disc - ref) / std::max(std::abs(ref), 1e-12);
              row["reference"] = ref;
              row["rel_err"] = rel;
              c_ref = fmt17(ref);
              c_rel = fmt17(rel);
              if (sd.beta) {
                row["beta_ref"] = *sd.beta;
                row["gap_rel_err"] = std::abs(nu(0) - *sd.beta) / *sd.beta;
              }
            }
            if (cfg.oracle.n_c > 0) {
              try {
                const FockResult fr =
                    fock_diagonalize(m, lam, cfg.oracle.n_c, cfg.oracle.k,
                                     cfg.oracle.dim_cap);
                row["fock"] = json{{"n_c", fr.n_c}, {"dim", fr.dim},
                                   {"eigenvalues", fr.eigenvalues},
                                   {"cutoff_flag", fr.cutoff_flag}};
              } catch (const Error& e) {
                row["fock"] = json{{"error", error_json(e)}};
              }
            }
          } catch (const Error& e) {
            row["error"] = error_json(e);
          }
          rows.push_back(row);
          csv << m.n() << ',' << fmt17(lam) << ',' << c_e << ',' << c_nu << ','
              << c_res << ',' << c_fv << ',' << c_ref << ',' << c_rel << '\n';
        }
      }
      orc["rows"] = rows;
      rep["oracle"] = orc;
      if (write_files) {
        write_text_file(out_dir + "/oracle.csv", csv.str());
        files.push_back(json{{"name", "oracle.csv"}, {"kind", "oracle"}});
      }
      timing["oracle_ms"] = sw.ms();
    }
  }

  rep["files"] = files;
  if (cfg.report.timing) {
    timing["total_ms"] = total.ms();
    rep["timing_ms"] = timing;
  }
  if (write_files && scope != Scope::validate)
    write_text_file(out_dir + "/report.json", rep.dump(2) + "\n");
  return rep;
}

}  // namespace pairspec::run
