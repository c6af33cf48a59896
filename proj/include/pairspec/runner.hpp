#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pairspec/config.hpp"
#include "pairspec/density.hpp"
#include "pairspec/dispersion.hpp"
#include "pairspec/spectrum.hpp"

namespace pairspec::run {

using json = nlohmann::ordered_json;

// What a CLI invocation computes. `analyze` is the superset; the narrower
// scopes skip everything they do not need.
enum class Scope { validate, dispersion, oracle, witness, analyze };
const char* scope_name(Scope s);

SpectralDensity make_density(const DensityConfig& dc);
GeneralizedVector make_gv(const GvConfig& gc, const SpectralDensity& d,
                          const quad::Options& opt);

// symbolic entries resolved against the computed couplings, sorted ascending
std::vector<LambdaSpec> resolve_lambdas(const std::vector<LambdaSpec>& in,
                                        const CriticalCouplings& cc);

json validation_json(const ValidationReport& rep);
json couplings_json(const CriticalCouplings& cc, double e0);
json result_json(const SpectrumDescription& sd);
json witness_json(const WitnessSeries& ws);

// Runs `scope` of the pipeline, returns the report; when `write_files` is set
// the report and the side CSVs land under cfg.report.out_dir.
json run_scoped(const RunConfig& cfg, Scope scope, bool write_files);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace pairspec::run
