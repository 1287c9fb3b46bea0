#include "sasaki/suites.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "sasaki/parallel.hpp"
#include "sasaki/rng.hpp"
#include "sasaki/verify.hpp"

namespace sasaki {

namespace {

constexpr double kPi = std::numbers::pi;

enum StreamId : std::uint64_t {
    kStreamCd = 1,
    kStreamLiyau = 2,
    kStreamHarnack = 3,
    kStreamGaussian = 4,
    kStreamGlobalTrain = 5,
    kStreamGlobalHoldout = 6,
    kStreamOrdering = 7,
};

ShootOptions shoot_options(const RunConfig& cfg) {
    ShootOptions o;
    o.tol = cfg.solver_tol;
    o.seed = cfg.seed;
    return o;
}

QuadOptions quad_options(const RunConfig& cfg) {
    QuadOptions o;
    o.rel_tol = cfg.quad_rel_tol;
    return o;
}

Json point_json(const Point& p) {
    Json j = Json::array();
    for (double c : p.xy) j.push_back(c);
    j.push_back(p.z);
    return j;
}

InequalityReport flag_report(const std::string& name, bool ok) {
    // encodes a boolean outcome in the margin convention: pass <=> ok
    InequalityReport r = InequalityReport::make(name, 0.0, ok ? 1.0 : -1.0, 0.5);
    return r;
}

Polynomial random_polynomial(const ModelSpace& m, int max_degree, std::uint64_t seed) {
    Xoshiro256ss rng(seed);
    const int nvars = m.real_dim();
    Polynomial p(nvars);
    const int terms = 4 + static_cast<int>(rng.next() % 14);
    for (int t = 0; t < terms; ++t) {
        Polynomial::Exponents e(nvars, 0);
        const int deg = static_cast<int>(rng.next() % (max_degree + 1));
        for (int d = 0; d < deg; ++d) e[rng.next() % nvars] += 1;
        p.add_term(e, rng.uniform(-1.0, 1.0));
    }
    return p;
}

Point random_point(Xoshiro256ss& rng, const ModelSpace& m, double box_xy, double box_z) {
    Point p = Point::origin(m);
    for (int k = 0; k < 2 * m.n; ++k) p.xy[k] = rng.uniform(-box_xy, box_xy);
    p.z = rng.uniform(-box_z, box_z);
    return p;
}

std::vector<Point> liyau_targets() {
    std::vector<Point> ys;
    ys.emplace_back(0.5, 0.0, 0.0);
    ys.emplace_back(1.0, 0.0, 0.0);
    ys.emplace_back(2.0, 0.0, 0.0);
    ys.emplace_back(0.0, 0.0, 0.1);
    ys.emplace_back(0.0, 0.0, 0.3);
    ys.emplace_back(0.0, 0.0, 0.5);
    ys.emplace_back(0.5, 0.0, 0.1);
    ys.emplace_back(1.0, 0.5, 0.2);
    ys.emplace_back(0.3, -0.4, -0.15);
    ys.emplace_back(1.0, 1.0, 0.3);
    return ys;
}

}  // namespace

int SuiteResult::passed() const {
    int k = 0;
    for (const auto& r : instances)
        if (r.error.empty() && r.pass) ++k;
    return k;
}
int SuiteResult::failed() const {
    int k = 0;
    for (const auto& r : instances)
        if (r.error.empty() && !r.pass) ++k;
    return k;
}
int SuiteResult::errors() const {
    int k = 0;
    for (const auto& r : instances)
        if (!r.error.empty()) ++k;
    return k;
}
bool SuiteResult::fits_feasible() const {
    for (const auto& f : fits)
        if (!f.feasible) return false;
    return true;
}

SuiteResult run_heat_gate(const RunConfig& cfg, bool full_mc) {
    cfg.validate();
    if (cfg.n != 1) throw std::invalid_argument("heat gate: n = 1 required for heat-kernel suites");
    const ModelSpace m(1);
    const QuadOptions quad = quad_options(cfg);
    SuiteResult res;
    res.suite = "heat_gate";

    // 1. normalization of p(1, 0, .)
    try {
        const double mass = normalization_integral(m, 1.0, quad);
        auto r = InequalityReport::make("gate_normalization", std::abs(mass - 1.0), 0.0, 1e-6);
        r.with_input("t", 1.0).with_prov("mass", mass, "quadrature", 1e-8);
        res.instances.push_back(r);
    } catch (const std::exception& e) {
        res.instances.push_back(InequalityReport::failure("gate_normalization", e.what()));
    }

    // 2. heat-equation residual at 10 points, t = 1
    {
        const std::vector<Point> pts = {
            {0.0, 0.0, 0.0},  {0.5, 0.0, 0.0},   {1.0, 0.0, 0.0},        {0.0, 1.2, 0.0},
            {1.0, 1.0, 0.2},  {0.0, 0.0, 0.3},   {0.3, -0.4, -0.15},     {1.5, 0.0, 0.5},
            {0.8, -0.6, 0.1}, {0.0, 0.0, -0.5}};
        for (const auto& y : pts) {
            try {
                const double resid = heat_equation_residual(m, 1.0, y, 2e-3, quad);
                auto r = InequalityReport::make("gate_heat_equation", resid, 0.0, 1e-5);
                r.with_input("t", 1.0).with_input("y", point_json(y));
                r.with_prov("residual", resid, "fd", 0.0);
                res.instances.push_back(r);
            } catch (const std::exception& e) {
                res.instances.push_back(InequalityReport::failure("gate_heat_equation", e.what()));
            }
        }
    }

    // 3. parabolic scaling p(l^2 t, 0, dl q) = l^-Q p(t, 0, q), l = 2
    {
        const std::vector<Point> pts = {{0.7, 0.3, 0.2}, {1.0, 0.0, 0.0}, {0.0, 0.0, 0.4}};
        for (const auto& q : pts) {
            try {
                const double t = 0.5;
                const double lhs = heat_kernel(m, 4.0 * t, Point::origin(m), dilate(m, 2.0, q), quad).p;
                const double rhs = heat_kernel(m, t, Point::origin(m), q, quad).p / 16.0;
                const double rel = std::abs(lhs - rhs) / rhs;
                auto r = InequalityReport::make("gate_parabolic_scaling", rel, 0.0, 1e-8);
                r.with_input("t", t).with_input("q", point_json(q));
                res.instances.push_back(r);
            } catch (const std::exception& e) {
                res.instances.push_back(InequalityReport::failure("gate_parabolic_scaling", e.what()));
            }
        }
    }

    // 4. Monte Carlo oracle agreement at 5 cells, t = 1
    {
        const long long paths = full_mc ? 200000 : 50000;
        const std::vector<BoxRegion> cells = {
            {{-0.4, -0.4, -0.4}, {0.4, 0.4, 0.4}},
            {{0.6, -0.4, -0.3}, {1.4, 0.4, 0.3}},
            {{-0.4, -0.4, 0.2}, {0.4, 0.4, 0.8}},
            {{-1.4, 0.1, -0.5}, {-0.6, 0.9, 0.1}},
            {{0.2, 0.2, -0.6}, {1.0, 1.0, 0.0}},
        };
        static const double gx[6] = {-0.932469514203152, -0.661209386466265, -0.238619186083197,
                                     0.238619186083197,  0.661209386466265,  0.932469514203152};
        static const double gw[6] = {0.171324492379170, 0.360761573048139, 0.467913934572691,
                                     0.467913934572691, 0.360761573048139, 0.171324492379170};
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            try {
                const auto& cell = cells[ci];
                DiffusionEstimate mc = mc_estimate(m, 1.0, cell, paths,
                                                   derive_seed(cfg.seed, 0xAB5 + ci), 2048);
                // cell-average of p by tensor Gauss-Legendre
                double avg = 0.0;
                for (int i = 0; i < 6; ++i)
                    for (int j = 0; j < 6; ++j)
                        for (int k = 0; k < 6; ++k) {
                            Point y(0.5 * (cell.lo[0] + cell.hi[0]) + 0.5 * (cell.hi[0] - cell.lo[0]) * gx[i],
                                    0.5 * (cell.lo[1] + cell.hi[1]) + 0.5 * (cell.hi[1] - cell.lo[1]) * gx[j],
                                    0.5 * (cell.lo[2] + cell.hi[2]) + 0.5 * (cell.hi[2] - cell.lo[2]) * gx[k]);
                            avg += gw[i] * gw[j] * gw[k] * heat_kernel(m, 1.0, Point::origin(m), y, quad).p;
                        }
                avg /= 8.0;
                const double tol = 3.0 * mc.std_error;
                auto r = InequalityReport::make("gate_mc_agreement", std::abs(mc.density - avg), 0.0, tol);
                r.with_input("cell", static_cast<int>(ci))
                    .with_input("paths", paths)
                    .with_prov("mc_density", mc.density, "mc", mc.std_error)
                    .with_prov("cell_avg_p", avg, "quadrature", 1e-9);
                res.instances.push_back(r);
            } catch (const std::exception& e) {
                res.instances.push_back(InequalityReport::failure("gate_mc_agreement", e.what()));
            }
        }
    }

    return res;
}

SuiteResult run_suite_cd(const RunConfig& cfg) {
    cfg.validate();
    const ModelSpace m(cfg.n);
    SuiteResult res;
    res.suite = "cd";

    // fixed random point sample shared by all polynomials
    Xoshiro256ss prng(derive_seed(cfg.seed, kStreamCd));
    std::vector<Point> pts;
    pts.reserve(cfg.cd_points);
    for (int i = 0; i < cfg.cd_points; ++i) pts.push_back(random_point(prng, m, 1.5, 1.5));

    std::vector<Polynomial> polys;
    polys.reserve(cfg.cd_polynomials);
    for (int i = 0; i < cfg.cd_polynomials; ++i)
        polys.push_back(random_polynomial(m, cfg.cd_max_degree,
                                          derive_seed(cfg.seed, kStreamCd ^ (0x100ULL + i))));

    const long long total = static_cast<long long>(polys.size()) * pts.size() * cfg.cd_nus.size();
    auto reports = map_indexed<InequalityReport>(
        total,
        [&](long long idx) {
            const std::size_t nnu = cfg.cd_nus.size();
            const std::size_t pi = static_cast<std::size_t>(idx / (pts.size() * nnu));
            const std::size_t rem = static_cast<std::size_t>(idx % (pts.size() * nnu));
            const std::size_t xi = rem / nnu;
            const double nu = cfg.cd_nus[rem % nnu];
            ScalarField f = ScalarField::polynomial(polys[pi]);
            InequalityReport r = check_cd(m, f, pts[xi], nu);
            r.with_input("poly", static_cast<int>(pi)).with_input("point", static_cast<int>(xi));
            return r;
        },
        cfg.parallel);
    res.instances = std::move(reports);

    // sharp case: f = z at the origin has zero residual
    {
        ScalarField fz = ScalarField::polynomial(Polynomial::variable(m.real_dim(), var_z(m)));
        InequalityReport r = check_cd(m, fz, Point::origin(m), 1.0);
        r.name = "curvature_dimension_sharp";
        r.tol = 1e-12;
        r.pass = std::abs(r.margin) <= 1e-12;  // sharp: margin must vanish
        r.note = "sharp case f = z at the origin; |residual| <= 1e-12 required";
        res.instances.push_back(r);
    }
    return res;
}

SuiteResult run_suite_liyau(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.n != 1) throw std::invalid_argument("liyau suite: n = 1 required");
    const ModelSpace m(1);
    const QuadOptions quad = quad_options(cfg);
    SuiteResult res;
    res.suite = "liyau";

    const auto ts = logspace(cfg.liyau_t_min, cfg.liyau_t_max, cfg.liyau_t_count);
    const auto ys = liyau_targets();

    struct Task {
        double t;
        Point y;
    };
    std::vector<Task> tasks;
    for (double t : ts)
        for (const auto& y : ys) tasks.push_back({t, y});

    auto reports = map_indexed<std::vector<InequalityReport>>(
        static_cast<long long>(tasks.size()),
        [&](long long i) {
            std::vector<InequalityReport> out;
            const auto& tk = tasks[static_cast<std::size_t>(i)];
            try {
                out.push_back(check_liyau(m, tk.t, tk.y, quad));
            } catch (const std::exception& e) {
                out.push_back(InequalityReport::failure("li_yau", e.what()));
            }
            try {
                out.push_back(check_scaled_liyau(m, tk.t, tk.y, 1.0, quad));
            } catch (const std::exception& e) {
                out.push_back(InequalityReport::failure("scaled_li_yau", e.what()));
            }
            // at tau^2 = n t / 3 the scaled form must equal the Li-Yau form
            // with doubled right-hand side
            try {
                const double tau_id = std::sqrt(m.n * tk.t / 3.0);
                InequalityReport a = check_liyau(m, tk.t, tk.y, quad);
                InequalityReport b = check_scaled_liyau(m, tk.t, tk.y, tau_id, quad);
                const double lhs_gap = std::abs(a.lhs - b.lhs) / std::max(1.0, std::abs(a.lhs));
                const double rhs_gap = std::abs(2.0 * a.rhs - b.rhs) / std::max(1.0, std::abs(b.rhs));
                InequalityReport idr = InequalityReport::make(
                    "scaled_li_yau_identity", std::max(lhs_gap, rhs_gap), 0.0, 1e-11);
                idr.with_input("t", tk.t).with_input("y", point_json(tk.y)).with_input("tau", tau_id);
                out.push_back(idr);
            } catch (const std::exception& e) {
                out.push_back(InequalityReport::failure("scaled_li_yau_identity", e.what()));
            }
            return out;
        },
        cfg.parallel);
    for (auto& batch : reports)
        for (auto& r : batch) res.instances.push_back(std::move(r));
    return res;
}

SuiteResult run_suite_harnack(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.n != 1) throw std::invalid_argument("harnack suite: n = 1 required");
    const ModelSpace m(1);
    const QuadOptions quad = quad_options(cfg);
    const ShootOptions shoot = shoot_options(cfg);
    SuiteResult res;
    res.suite = "harnack";

    // degenerate case y = z, s = 1, t = 2: factor reduces to 2^(n+3) = 16
    {
        const Point x = Point::origin(m);
        const Point y(0.5, 0.2, 0.1);
        InequalityReport r = check_harnack(m, 1.0, 2.0, x, y, y, 1.0, shoot, quad);
        r.name = "harnack_degenerate";
        res.instances.push_back(r);
    }

    struct Tuple {
        double s, t, tau;
        Point x, y, z;
    };
    std::vector<Tuple> tuples;
    Xoshiro256ss rng(derive_seed(cfg.seed, kStreamHarnack));
    int guard = 0;
    while (static_cast<int>(tuples.size()) < cfg.harnack_count && guard < 100000) {
        ++guard;
        Tuple tp;
        tp.s = std::exp(rng.uniform(std::log(0.15), std::log(1.2)));
        tp.t = tp.s * std::exp(rng.uniform(std::log(1.05), std::log(5.0)));
        tp.tau = cfg.harnack_taus[tuples.size() % cfg.harnack_taus.size()];
        tp.x = random_point(rng, m, 1.0, 0.5);
        auto offset = [&](double scale_t) {
            Point d = Point::origin(m);
            const double sc = std::sqrt(scale_t);
            for (int k = 0; k < 2 * m.n; ++k) d.xy[k] = rng.uniform(-1.5, 1.5) * sc;
            d.z = rng.uniform(-0.8, 0.8) * scale_t;
            return d;
        };
        tp.y = multiply(m, tp.x, offset(tp.s));
        tp.z = multiply(m, tp.x, offset(tp.t));
        // stay inside the kernel's double-precision window
        auto in_window = [&](double time, const Point& a, const Point& b) {
            const Point q = multiply(m, inverse(m, a), b);
            const double d = reduced_sr_distance(std::hypot(q.xy[0], q.xy[1]), q.z);
            return d * d / time <= 20.0 && std::abs(q.z) / time <= 7.0;
        };
        if (!in_window(tp.s, tp.x, tp.y) || !in_window(tp.t, tp.x, tp.z)) continue;
        tuples.push_back(tp);
    }

    auto reports = map_indexed<InequalityReport>(
        static_cast<long long>(tuples.size()),
        [&](long long i) {
            const auto& tp = tuples[static_cast<std::size_t>(i)];
            try {
                return check_harnack(m, tp.s, tp.t, tp.x, tp.y, tp.z, tp.tau, shoot, quad);
            } catch (const std::exception& e) {
                return InequalityReport::failure("harnack", e.what());
            }
        },
        cfg.parallel);
    for (auto& r : reports) res.instances.push_back(std::move(r));
    return res;
}

SuiteResult run_suite_gaussian(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.n != 1) throw std::invalid_argument("gaussian suite: n = 1 required");
    const ModelSpace m(1);
    const QuadOptions quad = quad_options(cfg);
    SuiteResult res;
    res.suite = "gaussian";

    const auto grid = default_gaussian_grid(m, cfg.seed ^ kStreamGaussian);

    std::vector<double> eps_sorted = cfg.gaussian_eps;
    std::sort(eps_sorted.begin(), eps_sorted.end());

    std::map<double, double> C_of_eps;
    for (double eps : eps_sorted) {
        FitResult fr = fit_gaussian_constants(m, grid, eps, quad);
        C_of_eps[eps] = fr.constants.count("C") ? fr.constants.at("C") : 0.0;
        res.fits.push_back(fr);
        res.instances.push_back(flag_report("gaussian_feasible_eps_" + format_double(eps), fr.feasible));
        {
            InequalityReport r = InequalityReport::make("gaussian_C_ge_1_eps_" + format_double(eps),
                                                        1.0, C_of_eps[eps], 1e-12);
            r.with_input("eps", eps);
            res.instances.push_back(r);
        }
    }

    // minimal constant is nonincreasing as eps relaxes the constraints
    for (std::size_t i = 0; i + 1 < eps_sorted.size(); ++i) {
        const double e_small = eps_sorted[i], e_big = eps_sorted[i + 1];
        InequalityReport r = InequalityReport::make(
            "gaussian_C_monotone", C_of_eps[e_big], C_of_eps[e_small],
            1e-9 * std::max(1.0, C_of_eps[e_small]));
        r.with_input("eps_small", e_small).with_input("eps_big", e_big);
        res.instances.push_back(r);
    }

    // d = 0 subgrid: the sandwich pinches to C^-1 <= p V <= C
    {
        std::vector<GaussianGridPoint> sub;
        for (const auto& g : grid) {
            double s = std::abs(g.y.z);
            for (double c : g.y.xy) s = std::max(s, std::abs(c));
            if (s == 0.0) sub.push_back(g);
        }
        FitResult fr = fit_gaussian_constants(m, sub, 0.5, quad);
        InequalityReport r =
            InequalityReport::make("gaussian_diagonal_C_ge_1", 1.0,
                                   fr.constants.count("C") ? fr.constants.at("C") : 0.0, 1e-12);
        r.with_input("subgrid_size", static_cast<int>(sub.size()));
        res.instances.push_back(r);
    }

    Json cj = Json::object();
    for (const auto& [e, c] : C_of_eps) cj[format_double(e)] = c;
    res.extra["C_of_eps"] = cj;
    return res;
}

SuiteResult run_suite_global(const RunConfig& cfg) {
    cfg.validate();
    const ModelSpace m(cfg.n);
    const ShootOptions shoot = shoot_options(cfg);
    SuiteResult res;
    res.suite = "global";

    // --- fit on the training sample
    const auto train_pairs =
        default_distance_pairs(m, cfg.global_random_pairs, derive_seed(cfg.seed, kStreamGlobalTrain));
    const auto train = collect_distance_samples(m, train_pairs, cfg.global_taus, shoot);
    FitResult fit = fit_distance_constants(train);
    fit.sample_description = "train: " + std::to_string(train_pairs.size()) + " pairs x " +
                             std::to_string(cfg.global_taus.size()) + " taus";
    const long long expected_train =
        static_cast<long long>(train_pairs.size()) * cfg.global_taus.size();
    fit.extra["solves_expected"] = expected_train;
    fit.extra["solves_converged"] = static_cast<long long>(train.size());
    if (static_cast<long long>(train.size()) != expected_train) fit.feasible = false;
    res.fits.push_back(fit);
    res.instances.push_back(flag_report("global_fit_feasible", fit.feasible));

    const double A = fit.feasible ? fit.constants.at("A") : 0.0;
    const double B = fit.feasible ? fit.constants.at("B") : 0.0;
    {
        InequalityReport r = InequalityReport::make("global_fitted_A_ge_1", 1.0, A, 1e-12);
        res.instances.push_back(r);
    }
    res.extra["A"] = A;
    res.extra["B"] = B;

    // --- held-out validation, no refit
    if (fit.feasible) {
        const auto hold_pairs = random_distance_pairs(m, cfg.holdout_pairs,
                                                      derive_seed(cfg.seed, kStreamGlobalHoldout));
        const auto hold = collect_distance_samples(m, hold_pairs, cfg.global_taus, shoot);
        const std::size_t per_pair = cfg.global_taus.size();
        if (hold.size() != hold_pairs.size() * per_pair) {
            res.instances.push_back(
                InequalityReport::failure("global_holdout", "holdout solver non-convergence"));
        } else {
            for (std::size_t pi = 0; pi < hold_pairs.size(); ++pi) {
                double worst_excess = -1e300;
                double worst_tau = 0.0;
                for (std::size_t k = 0; k < per_pair; ++k) {
                    const auto& s = hold[pi * per_pair + k];
                    const double v = s.d_tau > 0.0 ? std::sqrt(s.tau) * std::sqrt(s.d_tau) : 0.0;
                    const double viol = s.d - (A * s.d_tau + B * v);
                    const double tol_i = 1e-5 * std::max(1.0, s.d) + 10.0 * s.solver_err;
                    const double excess = viol - tol_i;
                    if (excess > worst_excess) {
                        worst_excess = excess;
                        worst_tau = s.tau;
                    }
                }
                InequalityReport r =
                    InequalityReport::make("global_holdout", worst_excess, 0.0, 0.0);
                r.with_input("pair", static_cast<int>(pi)).with_input("worst_tau", worst_tau);
                res.instances.push_back(r);
            }
        }
    }

    // --- metric ordering, monotonicity in tau, convergence as tau -> 0
    {
        const std::vector<double> taus = {0.01, 0.1, 1.0, 10.0};
        const auto pairs = random_distance_pairs(m, 100, derive_seed(cfg.seed, kStreamOrdering));
        const auto samples = collect_distance_samples(m, pairs, taus, shoot);
        if (samples.size() != pairs.size() * taus.size()) {
            res.instances.push_back(
                InequalityReport::failure("metric_ordering", "ordering solver non-convergence"));
        } else {
            for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
                const auto* row = &samples[pi * taus.size()];
                const double d = row[0].d;
                double max_excess = -1e300;     // d_tau - d
                double max_increase = -1e300;   // d_tau nondecreasing violation
                double serr = 0.0;
                for (std::size_t k = 0; k < taus.size(); ++k) {
                    max_excess = std::max(max_excess, row[k].d_tau - d);
                    serr = std::max(serr, row[k].solver_err);
                    if (k > 0) max_increase = std::max(max_increase, row[k].d_tau - row[k - 1].d_tau);
                }
                {
                    InequalityReport r = InequalityReport::make("metric_ordering", max_excess, 0.0,
                                                                1e-6 * std::max(1.0, d) + 10.0 * serr);
                    r.with_input("pair", static_cast<int>(pi)).with_prov("d", d, "closed-form", 1e-12);
                    res.instances.push_back(r);
                }
                {
                    InequalityReport r =
                        InequalityReport::make("tau_monotonicity", max_increase, 0.0,
                                               1e-6 * std::max(1.0, d) + 10.0 * serr);
                    r.with_input("pair", static_cast<int>(pi));
                    res.instances.push_back(r);
                }
                if (d >= 1.0) {
                    const double gap = (d - row[0].d_tau) / d;  // taus[0] = 0.01
                    InequalityReport r = InequalityReport::make("tau_convergence", gap, 0.01, 0.0);
                    r.with_input("pair", static_cast<int>(pi)).with_input("tau", taus[0]);
                    res.instances.push_back(r);
                }
            }
        }
    }
    return res;
}

SuiteResult run_suite_regimes(const RunConfig& cfg) {
    cfg.validate();
    const ModelSpace m(cfg.n);
    const ShootOptions shoot = shoot_options(cfg);
    SuiteResult res;
    res.suite = "regimes";

    const auto lambdas =
        logspace(cfg.regime_lambda_min, cfg.regime_lambda_max, cfg.regime_lambda_count);
    const Point a = Point::origin(m);
    Point b = Point::origin(m);
    b.z = 1.0;

    RegimeReport rr = regime_analysis(m, a, b, cfg.regime_tau, lambdas, shoot);
    if (!rr.all_converged) {
        res.instances.push_back(InequalityReport::failure("regime_slopes", "solver non-convergence"));
        return res;
    }
    {
        InequalityReport r = InequalityReport::make("regime_small_scale_slope",
                                                    std::abs(rr.small_scale_slope - 0.5), 0.0, 0.1);
        r.with_input("slope", rr.small_scale_slope);
        res.instances.push_back(r);
    }
    {
        InequalityReport r = InequalityReport::make("regime_large_scale_slope",
                                                    std::abs(rr.large_scale_slope - 1.0), 0.0, 0.1);
        r.with_input("slope", rr.large_scale_slope);
        res.instances.push_back(r);
    }
    // horizontal pairs sit on the diagonal d = d_tau at every scale
    {
        Point bh = Point::origin(m);
        bh.xy[0] = 1.0;
        RegimeReport rh = regime_analysis(m, a, bh, cfg.regime_tau,
                                          logspace(0.1, 10.0, 7), shoot);
        double worst = 0.0;
        for (const auto& row : rh.rows) worst = std::max(worst, std::abs(row.d - row.d_tau));
        InequalityReport r = InequalityReport::make("regime_horizontal_diagonal",
                                                    rh.all_converged ? worst : 1.0, 0.0, 1e-5);
        res.instances.push_back(r);
    }

    Json rows = Json::array();
    for (const auto& row : rr.rows)
        rows.push_back(Json{{"lambda", row.lambda}, {"d", row.d}, {"d_tau", row.d_tau}});
    res.extra["rows"] = rows;
    res.extra["small_scale_slope"] = rr.small_scale_slope;
    res.extra["large_scale_slope"] = rr.large_scale_slope;
    return res;
}

namespace {
std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}
}  // namespace

void write_report_json(const std::string& path, const SuiteResult& r, const RunConfig& cfg) {
    Json j = Json::object();
    j["schema_version"] = 1;
    j["timestamp"] = iso_timestamp();
    j["suite"] = r.suite;
    j["config"] = cfg.to_json();
    j["summary"] = Json{{"total", static_cast<int>(r.instances.size())},
                        {"passed", r.passed()},
                        {"failed", r.failed()},
                        {"errors", r.errors()}};
    if (!r.fits.empty()) {
        Json fits = Json::array();
        for (const auto& f : r.fits) fits.push_back(f.to_json());
        j["fits"] = fits;
    }
    if (!r.extra.empty()) j["extra"] = r.extra;
    Json inst = Json::array();
    for (const auto& i : r.instances) inst.push_back(i.to_json());
    j["instances"] = inst;

    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

void write_report_csv(const std::string& path, const SuiteResult& r) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << csv_line({"index", "name", "lhs", "rhs", "margin", "tol", "pass", "error"});
    for (std::size_t i = 0; i < r.instances.size(); ++i) {
        const auto& inst = r.instances[i];
        out << csv_line({std::to_string(i), inst.name, format_double(inst.lhs),
                         format_double(inst.rhs), format_double(inst.margin),
                         format_double(inst.tol), inst.pass ? "1" : "0",
                         inst.error.empty() ? "" : "error"});
    }
}

int suite_exit_code(const SuiteResult& r) {
    if (r.errors() > 0) return 3;
    if (r.failed() > 0 || !r.fits_feasible()) return 1;
    return 0;
}

}  // namespace sasaki
