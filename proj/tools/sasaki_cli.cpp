// sasaki: command-line front end for the verification toolkit.
//
// Subcommands:
//   distance  - solve d or d_tau between two points
//   verify    - run an inequality suite, write JSON + CSV reports
//   fit       - fit the Gaussian or global-distance constants
//   sweep     - emit CSV tables over parameter grids
//
// Exit codes: 0 all-pass, 1 inequality/fit failure, 2 usage error,
// 3 numerical non-convergence.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sasaki/config.hpp"
#include "sasaki/rng.hpp"
#include "sasaki/geodesics.hpp"
#include "sasaki/heat_kernel.hpp"
#include "sasaki/suites.hpp"
#include "sasaki/verify.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace {

using namespace sasaki;

bool parse_point(const std::string& s, const ModelSpace& m, Point& out) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            double v = std::stod(item, &pos);
            if (pos != item.size()) return false;
            vals.push_back(v);
        } catch (...) {
            return false;
        }
    }
    if (static_cast<int>(vals.size()) != m.real_dim()) return false;
    out.xy.assign(vals.begin(), vals.end() - 1);
    out.z = vals.back();
    return true;
}

struct GridSpec {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    bool log = false;
};

bool parse_grid(const std::string& s, GridSpec& g) {
    // lo:hi:count[:log|lin]
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4) return false;
    try {
        g.lo = std::stod(parts[0]);
        g.hi = std::stod(parts[1]);
        g.count = std::stoi(parts[2]);
    } catch (...) {
        return false;
    }
    g.log = parts.size() == 4 ? parts[3] == "log" : true;
    if (g.count < 0) return false;
    if (parts.size() == 4 && parts[3] != "log" && parts[3] != "lin") return false;
    return true;
}

std::vector<double> grid_values(const GridSpec& g) {
    std::vector<double> v;
    if (g.count == 0) return v;
    if (g.count == 1) return {g.lo};
    for (int k = 0; k < g.count; ++k) {
        const double f = static_cast<double>(k) / (g.count - 1);
        v.push_back(g.log ? g.lo * std::pow(g.hi / g.lo, f) : g.lo + (g.hi - g.lo) * f);
    }
    return v;
}

int cmd_distance(const RunConfig& cfg, const std::string& pa, const std::string& pb, bool sr,
                 double tau, const std::string& json_path, int steps, int starts) {
    const ModelSpace m(cfg.n);
    Point a, b;
    if (!parse_point(pa, m, a) || !parse_point(pb, m, b)) {
        std::cerr << "error: points must be " << m.real_dim() << " comma-separated reals\n";
        return 2;
    }
    if (!sr && !(tau > 0.0)) {
        std::cerr << "error: pass --sr or --tau <positive>\n";
        return 2;
    }
    ShootOptions opts;
    opts.tol = cfg.solver_tol;
    opts.seed = cfg.seed;
    if (steps > 0) opts.steps = steps;
    if (starts > 0) opts.starts = starts;

    const MetricSpec spec = sr ? MetricSpec::sub_riemannian() : MetricSpec::riemannian(tau);
    GeodesicResult r = distance(m, spec, a, b, opts);

    std::cout << "metric:          " << (sr ? "sub-riemannian" : "riemannian tau=" + format_double(tau))
              << "\n";
    std::cout << "length:          " << format_double(r.length) << "\n";
    std::cout << "endpoint_error:  " << format_double(r.endpoint_error) << "\n";
    std::cout << "converged:       " << (r.converged ? "yes" : "no") << "\n";
    std::cout << "restarts_used:   " << r.restarts_used << "\n";
    std::cout << "covector:        ";
    for (double c : r.initial_covector.pxy) std::cout << format_double(c) << " ";
    std::cout << format_double(r.initial_covector.pz) << "\n";
    if (sr && m.n == 1) {
        std::cout << "closed_form:     " << format_double(closed_form_distance(m, a, b)) << "\n";
    }

    if (!json_path.empty()) {
        Json j = Json::object();
        j["metric"] = sr ? "sr" : "riemannian";
        if (!sr) j["tau"] = tau;
        j["a"] = pa;
        j["b"] = pb;
        j["length"] = r.length;
        j["endpoint_error"] = r.endpoint_error;
        j["converged"] = r.converged;
        j["restarts_used"] = r.restarts_used;
        Json cov = Json::array();
        for (double c : r.initial_covector.pxy) cov.push_back(c);
        cov.push_back(r.initial_covector.pz);
        j["initial_covector"] = cov;
        std::ofstream out(json_path, std::ios::binary);
        out << j.dump(2) << "\n";
    }
    return r.converged ? 0 : 3;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
    const bool needs_kernel = (suite == "liyau" || suite == "harnack" || suite == "gaussian");
    if (needs_kernel) {
        SuiteResult gate = run_heat_gate(cfg, false);
        write_report_json(cfg.out_dir + "/heat_gate.json", gate, cfg);
        write_report_csv(cfg.out_dir + "/heat_gate.csv", gate);
        if (suite_exit_code(gate) != 0) {
            std::cerr << "heat-kernel validation gate failed; not running suite '" << suite << "'\n";
            return suite_exit_code(gate);
        }
    }

    SuiteResult r;
    if (suite == "cd") r = run_suite_cd(cfg);
    else if (suite == "liyau") r = run_suite_liyau(cfg);
    else if (suite == "harnack") r = run_suite_harnack(cfg);
    else if (suite == "gaussian") r = run_suite_gaussian(cfg);
    else if (suite == "global") r = run_suite_global(cfg);
    else if (suite == "regimes") r = run_suite_regimes(cfg);
    else {
        std::cerr << "error: unknown suite '" << suite << "'\n";
        return 2;
    }

    write_report_json(cfg.out_dir + "/" + suite + ".json", r, cfg);
    write_report_csv(cfg.out_dir + "/" + suite + ".csv", r);
    std::cout << "suite " << suite << ": " << r.passed() << " passed, " << r.failed()
              << " failed, " << r.errors() << " errors\n";
    return suite_exit_code(r);
}

int cmd_fit(const RunConfig& cfg, const std::string& what) {
    const ModelSpace m(cfg.n);
    if (what == "gaussian") {
        SuiteResult gate = run_heat_gate(cfg, false);
        if (suite_exit_code(gate) != 0) {
            std::cerr << "heat-kernel validation gate failed\n";
            return suite_exit_code(gate);
        }
        QuadOptions quad;
        quad.rel_tol = cfg.quad_rel_tol;
        const auto grid = default_gaussian_grid(m, cfg.seed ^ 4ULL);
        Json fits = Json::array();
        bool feasible = true;
        for (double eps : cfg.gaussian_eps) {
            FitResult fr = fit_gaussian_constants(m, grid, eps, quad);
            feasible = feasible && fr.feasible;
            fits.push_back(fr.to_json());
        }
        Json j = Json::object();
        j["fit"] = "gaussian";
        j["config"] = cfg.to_json();
        j["results"] = fits;
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream out(cfg.out_dir + "/fit_gaussian.json", std::ios::binary);
        out << j.dump(2) << "\n";
        std::cout << (feasible ? "feasible" : "INFEASIBLE") << "\n";
        return feasible ? 0 : 1;
    }
    if (what == "global") {
        ShootOptions shoot;
        shoot.tol = cfg.solver_tol;
        shoot.seed = cfg.seed;
        const auto pairs = default_distance_pairs(m, cfg.global_random_pairs,
                                                  derive_seed(cfg.seed, 5ULL));
        const auto samples = collect_distance_samples(m, pairs, cfg.global_taus, shoot);
        FitResult fr = fit_distance_constants(samples);
        fr.sample_description = std::to_string(pairs.size()) + " pairs x " +
                                std::to_string(cfg.global_taus.size()) + " taus";
        Json j = Json::object();
        j["fit"] = "global";
        j["config"] = cfg.to_json();
        j["result"] = fr.to_json();
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream out(cfg.out_dir + "/fit_global.json", std::ios::binary);
        out << j.dump(2) << "\n";
        std::cout << (fr.feasible ? "feasible" : "INFEASIBLE");
        if (fr.feasible)
            std::cout << " A=" << format_double(fr.constants.at("A"))
                      << " B=" << format_double(fr.constants.at("B"));
        std::cout << "\n";
        return fr.feasible ? 0 : 1;
    }
    std::cerr << "error: unknown fit '" << what << "'\n";
    return 2;
}

int cmd_sweep(const RunConfig& cfg, const std::string& what, const std::string& grid_spec,
              const std::string& out_path) {
    GridSpec gs;
    if (!parse_grid(grid_spec, gs)) {
        std::cerr << "error: bad grid spec '" << grid_spec << "' (want lo:hi:count[:log|lin])\n";
        return 2;
    }
    const ModelSpace m(cfg.n);
    const auto values = grid_values(gs);

    std::filesystem::path p(out_path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 2;
    }

    int rc = 0;
    if (what == "heat") {
        out << csv_line({"t", "p", "dt_log", "reeb_log", "quad_error", "scheme"});
        for (double t : values) {
            try {
                HeatKernelBundle b = heat_kernel(m, t, Point::origin(m), Point::origin(m));
                out << csv_line({format_double(t), format_double(b.p), format_double(b.dt_log),
                                 format_double(b.reeb_log), format_double(b.quad_error),
                                 "quadrature"});
            } catch (const std::exception& e) {
                out << csv_line({format_double(t), "", "", "", "", std::string("error:") + e.what()});
                rc = 3;
            }
        }
    } else if (what == "liyau-margin") {
        out << csv_line({"t", "y", "lhs", "rhs", "margin", "tol", "pass", "scheme"});
        for (double t : values) {
            Point y(1.0, 0.0, 0.0);
            try {
                InequalityReport r = check_liyau(m, t, y);
                out << csv_line({format_double(t), "1,0,0", format_double(r.lhs),
                                 format_double(r.rhs), format_double(r.margin),
                                 format_double(r.tol), r.pass ? "1" : "0", "quadrature"});
            } catch (const std::exception& e) {
                out << csv_line({format_double(t), "1,0,0", "", "", "", "", "0",
                                 std::string("error:") + e.what()});
                rc = 3;
            }
        }
    } else if (what == "distance-ratio") {
        out << csv_line({"lambda", "d", "d_tau", "ratio", "scheme"});
        ShootOptions shoot;
        shoot.tol = cfg.solver_tol;
        shoot.seed = cfg.seed;
        Point a = Point::origin(m), b = Point::origin(m);
        b.z = 1.0;
        RegimeReport rr = regime_analysis(m, a, b, cfg.regime_tau, values, shoot);
        for (const auto& row : rr.rows) {
            if (!std::isfinite(row.d) || !std::isfinite(row.d_tau)) {
                out << csv_line({format_double(row.lambda), "", "", "", "error:non-convergence"});
                rc = 3;
                continue;
            }
            out << csv_line({format_double(row.lambda), format_double(row.d),
                             format_double(row.d_tau), format_double(row.d / row.d_tau),
                             "shooting"});
        }
    } else {
        std::cerr << "error: unknown sweep '" << what << "'\n";
        return 2;
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sasaki: desk-scale verification of sub-Riemannian heat-kernel and distance estimates on the Heisenberg model space"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::uint64_t seed_flag = 0;
    bool seed_set = false;
    int threads = 0;

    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--seed", seed_flag, "RNG seed (default: SASAKI_SEED or 12345)")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("-o,--out", cfg.out_dir, "output directory for reports");
    app.add_option("--threads", threads, "OpenMP thread count (0 = library default)");
    app.add_flag("--serial", [&cfg](std::int64_t) { cfg.parallel = false; },
                 "disable parallel kernels");

    // distance
    auto* dcmd = app.add_subcommand("distance", "solve the distance between two points");
    std::string pa, pb, djson;
    bool sr = false;
    double tau = 0.0;
    int steps = 0, starts = 0;
    dcmd->add_option("a", pa, "first point, comma-separated coordinates")->required();
    dcmd->add_option("b", pb, "second point")->required();
    dcmd->add_flag("--sr", sr, "sub-Riemannian metric");
    dcmd->add_option("--tau", tau, "scaled Riemannian metric parameter");
    dcmd->add_option("--json", djson, "write the result as JSON");
    dcmd->add_option("--steps", steps, "integrator steps");
    dcmd->add_option("--starts", starts, "multi-start count");

    // verify
    auto* vcmd = app.add_subcommand("verify", "run an inequality suite");
    std::string suite;
    vcmd->add_option("suite", suite, "cd|liyau|harnack|gaussian|global|regimes")->required();
    int count = 0;
    vcmd->add_option("--count", count, "sample count override (harnack tuples / cd polynomials)");
    std::string tau_list;
    vcmd->add_option("--tau", tau_list, "comma-separated tau grid override");

    // fit
    auto* fcmd = app.add_subcommand("fit", "fit inequality constants");
    std::string what;
    fcmd->add_option("what", what, "gaussian|global")->required();
    std::string eps_list;
    fcmd->add_option("--eps", eps_list, "comma-separated eps list (gaussian)");
    std::string ftau_list;
    fcmd->add_option("--tau", ftau_list, "comma-separated tau grid (global)");

    // sweep
    auto* scmd = app.add_subcommand("sweep", "emit a CSV table over a grid");
    std::string quantity, grid_spec = "0.1:10:20:log", sweep_out;
    scmd->add_option("quantity", quantity, "heat|liyau-margin|distance-ratio")->required();
    scmd->add_option("--grid", grid_spec, "grid spec lo:hi:count[:log|lin]");
    scmd->add_option("--out-file", sweep_out, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) load_config_file(cfg, config_path);
        if (seed_set) cfg.seed = seed_flag;
        if (!tau_list.empty() && vcmd->parsed()) cfg.set("global_taus", tau_list);
        if (!ftau_list.empty()) cfg.set("global_taus", ftau_list);
        if (!eps_list.empty()) cfg.set("gaussian_eps", eps_list);
        if (count > 0) {
            cfg.harnack_count = count;
            cfg.cd_polynomials = std::min(cfg.cd_polynomials, count);
        }
#if defined(_OPENMP)
        if (threads > 0) omp_set_num_threads(threads);
#endif
        cfg.validate();

        if (dcmd->parsed()) return cmd_distance(cfg, pa, pb, sr, tau, djson, steps, starts);
        if (vcmd->parsed()) return cmd_verify(cfg, suite);
        if (fcmd->parsed()) return cmd_fit(cfg, what);
        if (scmd->parsed()) {
            if (sweep_out.empty()) sweep_out = cfg.out_dir + "/sweep_" + quantity + ".csv";
            return cmd_sweep(cfg, quantity, grid_spec, sweep_out);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const sasaki::QuadratureError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
