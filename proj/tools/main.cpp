#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pairspec/config.hpp"
#include "pairspec/errors.hpp"
#include "pairspec/runner.hpp"

namespace {

using pairspec::run::json;

std::string num(const json& j) {
  if (j.is_object() && j.contains("value"))
    return num(j["value"]);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", j.get<double>());
  return buf;
}

void print_validation(const json& rep, bool quiet) {
  const json& v = rep.at("validation");
  if (!quiet) {
    for (const auto& c : v.at("checks")) {
      std::ostringstream os;
      os << (c.at("pass").get<bool>() ? "PASS" : "FAIL") << "  "
         << c.at("name").get<std::string>() << " (clause "
         << c.at("clause").get<int>() << ")";
      if (!c.at("pass").get<bool>()) {
        os << ": " << c.at("detail").get<std::string>();
        if (c.contains("witness_mu")) os << " [mu = " << num(c["witness_mu"]) << "]";
      }
      std::cout << os.str() << "\n";
    }
  }
  std::cout << rep.at("density").at("label").get<std::string>() << ": "
            << (v.at("all_pass").get<bool>() ? "all checks pass"
                                             : "assumption checks FAILED")
            << "\n";
}

void print_summary(const json& rep, bool quiet) {
  if (quiet) return;
  if (rep.contains("couplings")) {
    const json& c = rep["couplings"];
    std::cout << "lambda_c0 = " << num(c["lambda_c0"])
              << "  lambda_c = " << num(c["lambda_c"])
              << "  lambda_T = " << num(c["lambda_T"]) << "\n";
  }
  if (rep.contains("results")) {
    for (const auto& r : rep["results"]) {
      std::cout << "lambda = " << num(r["lambda"]);
      if (r.contains("lambda_symbol"))
        std::cout << " (" << r["lambda_symbol"].get<std::string>() << ")";
      if (r.contains("error")) {
        std::cout << ": " << r["error"]["type"].get<std::string>() << " error: "
                  << r["error"]["message"].get<std::string>() << "\n";
        continue;
      }
      std::cout << ": " << r["regime"].get<std::string>();
      if (r.contains("e_g")) std::cout << "  e_g = " << num(r["e_g"]);
      if (r.contains("e_b")) std::cout << "  e_b = " << num(r["e_b"]);
      if (r.contains("beta")) std::cout << "  beta = " << num(r["beta"]);
      if (r.contains("shift")) std::cout << "  shift = " << num(r["shift"]);
      std::cout << "\n";
    }
  }
  if (rep.contains("dispersion")) {
    for (const auto& e : rep["dispersion"]) {
      if (!e.contains("delta_inf")) continue;
      std::cout << "lambda = " << num(e["lambda"]) << ": delta_inf = "
                << num(e["delta_inf"]["value"]) << " at s = "
                << num(e["delta_inf"]["s_at"]) << "\n";
    }
  }
  if (rep.contains("witness")) {
    for (const auto& w : rep["witness"]) {
      std::cout << "lambda = " << num(w["lambda"]) << ": ";
      if (w.contains("error")) {
        std::cout << w["error"]["message"].get<std::string>() << "\n";
        continue;
      }
      std::cout << "c_lambda = " << num(w["c_lambda"]);
      if (w.contains("rayleigh_at_n_max"))
        std::cout << "  quotient(n_max) = " << num(w["rayleigh_at_n_max"]);
      if (w.contains("crossing_n"))
        std::cout << "  crossing at n = " << w["crossing_n"].get<std::uint64_t>();
      else if (w.contains("crossing_estimate"))
        std::cout << "  projected crossing n ~ " << num(w["crossing_estimate"]);
      std::cout << "\n";
    }
  }
  if (rep.contains("oracle")) {
    for (const auto& row : rep["oracle"]["rows"]) {
      std::cout << "oracle n = " << row["n"].get<int>() << "  lambda = "
                << num(row["lambda"]);
      if (row.contains("error"))
        std::cout << ": " << row["error"]["message"].get<std::string>();
      else {
        std::cout << "  e_disc = " << num(row["e_disc"]);
        if (row.contains("rel_err")) std::cout << "  rel_err = " << num(row["rel_err"]);
      }
      std::cout << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral analysis of a pair-interaction Hamiltonian"};
  app.require_subcommand(1);

  std::string config_path, out_dir, lambda_csv, oracle_n_csv;
  bool quiet = false;
  app.add_option("-c,--config", config_path, "TOML config file");
  app.add_option("-o,--out", out_dir, "output directory (overrides report.out_dir)");
  app.add_option("--lambda", lambda_csv,
                 "couplings, comma separated; numbers or lambda_c0/lambda_c/lambda_T");
  app.add_option("--oracle-n", oracle_n_csv, "oracle mode counts, comma separated");
  app.add_flag("-q,--quiet", quiet, "only errors and the final summary line");

  using pairspec::run::Scope;
  struct Sub { const char* name; const char* help; Scope scope; };
  const Sub subs[] = {
      {"validate", "check the density against the standing assumptions",
       Scope::validate},
      {"analyze", "full spectral report (classification, curves, oracle, witness)",
       Scope::analyze},
      {"dispersion", "boundary values of D on an s-grid, plus delta_inf",
       Scope::dispersion},
      {"oracle", "finite-mode Bogoliubov cross-check", Scope::oracle},
      {"witness", "Rayleigh-quotient witness series for the unbounded regime",
       Scope::witness},
  };
  for (const Sub& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  pairspec::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = pairspec::load_config(config_path);
    if (!out_dir.empty()) cfg.report.out_dir = out_dir;
    if (!lambda_csv.empty()) cfg.lambdas = pairspec::parse_lambda_list(lambda_csv);
    if (!oracle_n_csv.empty()) {
      std::vector<int> ns;
      std::stringstream ss(oracle_n_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          ns.push_back(std::stoi(tok));
        } catch (const std::exception&) {
          throw pairspec::InputError("--oracle-n: '" + tok + "' is not an integer");
        }
        if (ns.back() < 1)
          throw pairspec::InputError("--oracle-n: entries must be >= 1");
      }
      if (ns.empty()) throw pairspec::InputError("--oracle-n: empty list");
      cfg.oracle.n = ns;
      cfg.oracle.enabled = true;
    }
  } catch (const pairspec::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  Scope scope = Scope::analyze;
  for (const Sub& s : subs)
    if (app.got_subcommand(s.name)) scope = s.scope;

  try {
    const json rep = pairspec::run::run_scoped(cfg, scope, scope != Scope::validate);
    if (scope == Scope::validate) {
      print_validation(rep, quiet);
      return rep.at("validation").at("all_pass").get<bool>() ? 0 : 3;
    }
    print_summary(rep, quiet);
    std::cout << "report: " << cfg.report.out_dir << "/report.json\n";
    return 0;
  } catch (const pairspec::InputError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const pairspec::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
