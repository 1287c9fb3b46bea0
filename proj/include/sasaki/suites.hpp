#pragma once

// Verification suites: one function per CLI suite, all returning the same
// result shape so the CLI and the acceptance runner share code paths exactly.

#include <string>
#include <vector>

#include "sasaki/config.hpp"
#include "sasaki/report.hpp"

namespace sasaki {

struct SuiteResult {
    std::string suite;
    std::vector<InequalityReport> instances;
    std::vector<FitResult> fits;
    Json extra = Json::object();

    int passed() const;
    int failed() const;
    int errors() const;
    bool all_pass() const { return failed() == 0 && errors() == 0 && fits_feasible(); }
    bool fits_feasible() const;
};

// Heat-kernel validation gate: normalization, heat-equation residual,
// parabolic scaling, Monte Carlo agreement. Must pass before any
// kernel-based inequality suite runs.
SuiteResult run_heat_gate(const RunConfig& cfg, bool full_mc = true);

SuiteResult run_suite_cd(const RunConfig& cfg);
SuiteResult run_suite_liyau(const RunConfig& cfg);
SuiteResult run_suite_harnack(const RunConfig& cfg);
SuiteResult run_suite_gaussian(const RunConfig& cfg);
SuiteResult run_suite_global(const RunConfig& cfg);
SuiteResult run_suite_regimes(const RunConfig& cfg);

// Report emission. The JSON timestamp is isolated on its own line so byte
// comparisons can exclude it; everything else is deterministic given
// (config, seed).
void write_report_json(const std::string& path, const SuiteResult& r, const RunConfig& cfg);
void write_report_csv(const std::string& path, const SuiteResult& r);

// exit-code contract: 0 all-pass, 1 inequality/fit failure, 3 numerical error
int suite_exit_code(const SuiteResult& r);

}  // namespace sasaki
