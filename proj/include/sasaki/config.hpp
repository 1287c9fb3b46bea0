#pragma once

// Run configuration shared by the CLI and the verification suites.
// Flat key=value config files; CLI flags override; everything is echoed
// into report headers. Seed default comes from SASAKI_SEED when set.

#include <cstdint>
#include <string>
#include <vector>

#include "sasaki/report.hpp"

namespace sasaki {

struct RunConfig {
    int n = 1;
    std::uint64_t seed = 12345;

    // tolerances
    double quad_rel_tol = 1e-10;
    double solver_tol = 1e-7;       // shooting convergence in the homogeneous gauge
    double ineq_tol_factor = 10.0;  // inequality tol = factor x propagated error

    // curvature-dimension suite
    int cd_polynomials = 50;
    int cd_points = 100;
    int cd_max_degree = 5;
    std::vector<double> cd_nus = {0.1, 1.0, 10.0};

    // Li-Yau suite grid
    double liyau_t_min = 0.05, liyau_t_max = 5.0;
    int liyau_t_count = 10;

    // Harnack suite
    int harnack_count = 200;
    std::vector<double> harnack_taus = {0.1, 1.0, 10.0};

    // Gaussian sandwich
    std::vector<double> gaussian_eps = {0.1, 0.5, 1.0};

    // global distance fit
    std::vector<double> global_taus;  // default logspace[0.01, 100], 9 values
    int global_random_pairs = 140;
    int holdout_pairs = 200;

    // regime analysis
    double regime_tau = 1.0;
    double regime_lambda_min = 0.01, regime_lambda_max = 100.0;
    int regime_lambda_count = 25;

    // execution
    bool parallel = true;
    std::string out_dir = "reports";

    RunConfig();

    void validate() const;  // throws on non-positive tolerances etc.
    Json to_json() const;

    // key=value assignment; returns false for unknown keys.
    bool set(const std::string& key, const std::string& value);
};

// Parse a flat key=value file (supports '#' comments and blank lines).
void load_config_file(RunConfig& cfg, const std::string& path);

std::vector<double> logspace(double lo, double hi, int count);

std::uint64_t default_seed_from_env();

}  // namespace sasaki
