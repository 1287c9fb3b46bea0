#include "sasaki/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sasaki/parallel.hpp"
#include "sasaki/rng.hpp"

namespace sasaki {

namespace {
constexpr double kPi = std::numbers::pi;

Json point_json(const Point& p) {
    Json j = Json::array();
    for (double c : p.xy) j.push_back(c);
    j.push_back(p.z);
    return j;
}
}  // namespace

InequalityReport check_cd(const ModelSpace& m, const ScalarField& f, const Point& p, double nu) {
    OperatorResult g2 = gamma2(m, f, p);
    OperatorResult g2t = gamma2_T(m, f, p);
    OperatorResult lap = sublaplacian(m, f, p);
    GradientResult grad = horizontal_gradient(m, f, p);
    OperatorResult tf = reeb_derivative(m, f, p);

    const double lhs = lap.value * lap.value / (2.0 * m.n) - grad.norm_squared() / nu +
                       0.5 * m.n * tf.value * tf.value;
    const double rhs = g2.value + nu * g2t.value;

    const bool exact = f.is_polynomial();
    double tol = 1e-10;
    if (!exact) {
        OperatorResult res = cd_residual(m, f, p, nu);
        tol = std::max(1e-10, 10.0 * res.est_error);
    }

    InequalityReport r = InequalityReport::make("curvature_dimension", lhs, rhs, tol);
    const char* scheme = exact ? "exact-poly" : "fd";
    r.with_input("nu", nu)
        .with_input("point", point_json(p))
        .with_prov("gamma2", g2.value, scheme, g2.est_error)
        .with_prov("gamma2_T", g2t.value, scheme, g2t.est_error)
        .with_prov("sublaplacian", lap.value, scheme, lap.est_error)
        .with_prov("gradnorm2", grad.norm_squared(), scheme, grad.est_error)
        .with_prov("reeb", tf.value, scheme, tf.est_error);
    return r;
}

InequalityReport check_liyau(const ModelSpace& m, double t, const Point& y, const QuadOptions& opt) {
    const HeatKernelBundle b = heat_kernel(m, t, Point::origin(m), y, opt);
    const double n = m.n;
    const double g2 = b.grad_log[0] * b.grad_log[0] + b.grad_log[1] * b.grad_log[1];
    const double lhs = g2 + (n / 3.0) * t * b.reeb_log * b.reeb_log;
    const double c = 1.0 + 3.0 / n;
    const double rhs = c * b.dt_log + n * c * c / t;

    const double gmag = std::abs(b.grad_log[0]) + std::abs(b.grad_log[1]);
    const double dlhs = 2.0 * gmag * b.err.grad_log + b.err.grad_log * b.err.grad_log +
                        (n / 3.0) * t * (2.0 * std::abs(b.reeb_log) * b.err.reeb_log);
    const double drhs = c * b.err.dt_log;
    const double tol = 10.0 * (dlhs + drhs) + 1e-12;

    InequalityReport r = InequalityReport::make("li_yau", lhs, rhs, tol);
    r.with_input("t", t)
        .with_input("y", point_json(y))
        .with_prov("p", b.p, "quadrature", b.p * b.err.p_rel)
        .with_prov("dt_log", b.dt_log, "quadrature", b.err.dt_log)
        .with_prov("gradnorm2_log", g2, "quadrature", dlhs)
        .with_prov("reeb_log", b.reeb_log, "quadrature", b.err.reeb_log);
    return r;
}

InequalityReport check_scaled_liyau(const ModelSpace& m, double t, const Point& y, double tau,
                                    const QuadOptions& opt) {
    if (tau < 0.0) throw std::invalid_argument("check_scaled_liyau: tau must be >= 0");
    const HeatKernelBundle b = heat_kernel(m, t, Point::origin(m), y, opt);
    const double n = m.n;
    const double g2 = b.grad_log[0] * b.grad_log[0] + b.grad_log[1] * b.grad_log[1];
    const double lhs = g2 + tau * tau * b.reeb_log * b.reeb_log;

    const double c = 1.0 + 3.0 / n;
    const double scale = 1.0 + 3.0 * tau * tau / (n * t);
    const double rhs = scale * c * b.dt_log + (n * c * c / t) * scale;

    // internal consistency with the a(u), b(u) form used by the Harnack proof
    double ab_form_gap = 0.0;
    if (tau > 0.0) {
        HarnackParams hp(m.n, tau, 0.5 * t, t);
        const double rhs_ab = hp.a(t) * b.dt_log + hp.b(t);
        ab_form_gap = std::abs(rhs_ab - rhs) / std::max(1.0, std::abs(rhs));
        if (ab_form_gap > 1e-12)
            throw std::logic_error("check_scaled_liyau: a(u),b(u) form mismatch");
    }

    const double gmag = std::abs(b.grad_log[0]) + std::abs(b.grad_log[1]);
    const double dlhs = 2.0 * gmag * b.err.grad_log + b.err.grad_log * b.err.grad_log +
                        tau * tau * 2.0 * std::abs(b.reeb_log) * b.err.reeb_log;
    const double drhs = scale * c * b.err.dt_log;
    const double tol = 10.0 * (dlhs + drhs) + 1e-12;

    InequalityReport r = InequalityReport::make("scaled_li_yau", lhs, rhs, tol);
    r.with_input("t", t)
        .with_input("tau", tau)
        .with_input("y", point_json(y))
        .with_input("ab_form_gap", ab_form_gap)
        .with_prov("p", b.p, "quadrature", b.p * b.err.p_rel)
        .with_prov("dt_log", b.dt_log, "quadrature", b.err.dt_log)
        .with_prov("reeb_log", b.reeb_log, "quadrature", b.err.reeb_log);
    return r;
}

InequalityReport check_harnack(const ModelSpace& m, double s, double t, const Point& x,
                               const Point& y, const Point& z, double tau,
                               const ShootOptions& shoot, const QuadOptions& opt) {
    if (!(0.0 < s && s < t)) throw std::invalid_argument("check_harnack: need 0 < s < t");
    if (!(tau > 0.0)) throw std::invalid_argument("check_harnack: tau must be > 0");

    const HeatKernelBundle bs = heat_kernel(m, s, x, y, opt);
    const HeatKernelBundle bt = heat_kernel(m, t, x, z, opt);

    // d_tau between the two kernel arguments being compared (the proof's
    // path runs from y to z; the statement's d_tau(x,y) is a misprint).
    double d_tau = 0.0, d_tau_err = 0.0;
    {
        bool same = (y.z == z.z) && (y.xy == z.xy);
        if (!same) {
            GeodesicResult gr = distance(m, MetricSpec::riemannian(tau), y, z, shoot);
            if (!gr.converged)
                return InequalityReport::failure("harnack", "d_tau solver did not converge");
            d_tau = gr.length;
            d_tau_err = gr.endpoint_error * std::max(1.0, gr.length) + 1e-9;
        }
    }

    const double n = m.n;
    const double c = 1.0 + 3.0 / n;
    const double lt = std::log(t / s);
    const double expo =
        c * (1.0 / (4.0 * (t - s)) + (3.0 / n) * tau * tau * lt / (4.0 * (t - s) * (t - s))) *
        d_tau * d_tau;
    const double factor = std::pow(t / s, n + 3.0) * std::exp(expo);
    const double lhs = bs.p;
    const double rhs = bt.p * factor;

    const double dexp = c *
                        (1.0 / (4.0 * (t - s)) +
                         (3.0 / n) * tau * tau * lt / (4.0 * (t - s) * (t - s))) *
                        2.0 * d_tau * d_tau_err;
    const double drhs = rhs * (bt.err.p_rel + dexp);
    const double dlhs = lhs * bs.err.p_rel;
    const double tol = 10.0 * (dlhs + drhs) + 1e-300;

    InequalityReport r = InequalityReport::make("harnack", lhs, rhs, tol);
    r.note = "d_tau taken between y and z per the proof; the statement's d_tau(x,y) is treated as a misprint";
    r.with_input("s", s)
        .with_input("t", t)
        .with_input("tau", tau)
        .with_input("x", point_json(x))
        .with_input("y", point_json(y))
        .with_input("z", point_json(z))
        .with_prov("p(s,x,y)", bs.p, "quadrature", dlhs)
        .with_prov("p(t,x,z)", bt.p, "quadrature", bt.p * bt.err.p_rel)
        .with_prov("d_tau(y,z)", d_tau, "shooting", d_tau_err);
    return r;
}

FitResult fit_gaussian_constants(const ModelSpace& m, const std::vector<GaussianGridPoint>& grid,
                                 double eps, const QuadOptions& opt) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("fit_gaussian_constants: need 0 < eps <= 1");

    FitResult fr;
    fr.sample_size = static_cast<int>(grid.size());
    fr.sample_description = "gaussian sandwich grid, eps=" + format_double(eps);

    const double c1 = ball_volume_c1(m);
    const double n = m.n;
    const Point o = Point::origin(m);

    struct Entry {
        double ln_up, ln_lo;
        bool ok;
    };
    auto entries = map_indexed<Entry>(static_cast<long long>(grid.size()), [&](long long i) {
        Entry e{0.0, 0.0, true};
        const auto& g = grid[static_cast<std::size_t>(i)];
        try {
            const HeatKernelBundle b = heat_kernel(m, g.t, o, g.y, opt);
            const double d = closed_form_distance(m, o, g.y);
            const double lnV = std::log(c1) + 0.5 * m.homogeneous_dim() * std::log(g.t);
            const double L = std::log(b.p) + lnV;
            e.ln_up = L + d * d / ((4.0 + eps) * g.t);
            e.ln_lo = -(1.0 + 3.0 / n) * d * d / ((4.0 - eps) * g.t) - L;
        } catch (const std::exception&) {
            e.ok = false;
        }
        return e;
    });

    double lnC = 0.0;
    bool all_ok = true;
    for (const auto& e : entries) {
        if (!e.ok) {
            all_ok = false;
            continue;
        }
        lnC = std::max({lnC, e.ln_up, e.ln_lo});
    }
    fr.feasible = all_ok && std::isfinite(lnC);
    fr.constants["C"] = std::exp(lnC);
    fr.extra["eps"] = eps;
    fr.extra["ln_C"] = lnC;
    fr.extra["V_c1"] = c1;
    fr.max_violation = 0.0;  // minimal feasible C saturates the worst constraint
    return fr;
}

std::vector<GaussianGridPoint> default_gaussian_grid(const ModelSpace& m, std::uint64_t seed) {
    // Base targets: horizontal, vertical, mixed; kept inside the numeric
    // window d(0,y)^2 <= 25 and |z| <= 8 after parabolic scaling by sqrt(t),
    // so every kernel value stays resolvable in double precision.
    std::vector<Point> base;
    base.emplace_back(0.0, 0.0, 0.0);
    for (double r : {0.3, 0.6, 1.0, 1.5, 2.0, 2.8, 3.5, 4.5}) base.emplace_back(r, 0.0, 0.0);
    for (double z : {0.1, 0.25, 0.5, 0.9, 1.5}) {
        base.emplace_back(0.0, 0.0, z);
        base.emplace_back(0.0, 0.0, -z);
    }
    Xoshiro256ss rng(derive_seed(seed, 0x6a55ULL));
    while (base.size() < 50) {
        const double ang = rng.uniform(0.0, 2.0 * kPi);
        const double rad = rng.uniform(0.05, 3.0);
        const double z = rng.uniform(-1.5, 1.5);
        Point y(rad * std::cos(ang), rad * std::sin(ang), z);
        if (reduced_sr_distance(rad, z) <= 4.9) base.push_back(y);
    }

    std::vector<GaussianGridPoint> grid;
    const int tcount = 12;
    for (int k = 0; k < tcount; ++k) {
        const double t = 0.1 * std::pow(100.0, static_cast<double>(k) / (tcount - 1));
        const double lam = std::sqrt(t);
        for (const auto& y : base) {
            grid.push_back({t, dilate(m, lam, y)});  // parabolically scaled family
            // fixed targets where the window allows
            const double d = reduced_sr_distance(std::hypot(y.xy[0], y.xy[1]), y.z);
            if (d * d / t <= 25.0 && std::abs(y.z) / t <= 8.0) grid.push_back({t, y});
        }
    }
    return grid;
}

InequalityReport check_global_distance(const ModelSpace& m, const Point& x, const Point& y,
                                       double tau, double A, double B, const ShootOptions& opts) {
    if (!(tau > 0.0)) throw std::invalid_argument("check_global_distance: tau must be > 0");

    double d, d_err;
    if (m.n == 1) {
        d = closed_form_distance(m, x, y);
        d_err = 1e-12 * std::max(1.0, d);
    } else {
        GeodesicResult gr = distance(m, MetricSpec::sub_riemannian(), x, y, opts);
        if (!gr.converged) return InequalityReport::failure("global_distance", "d solver failed");
        d = gr.length;
        d_err = gr.endpoint_error * std::max(1.0, gr.length) + 1e-9;
    }

    double d_tau = 0.0, d_tau_err = 0.0;
    const bool same = (x.xy == y.xy) && (x.z == y.z);
    if (!same) {
        GeodesicResult gr = distance(m, MetricSpec::riemannian(tau), x, y, opts);
        if (!gr.converged) return InequalityReport::failure("global_distance", "d_tau solver failed");
        d_tau = gr.length;
        d_tau_err = gr.endpoint_error * std::max(1.0, gr.length) + 1e-9;
    }

    const double rhs = A * d_tau + B * std::sqrt(tau) * std::sqrt(d_tau);
    const double ordering_margin = d - d_tau;  // d_tau <= d

    const double denom = std::max(d_tau, 1e-30);
    const double drhs = A * d_tau_err + 0.5 * B * std::sqrt(tau) * d_tau_err / std::sqrt(denom);
    const double tol = 10.0 * (d_err + drhs) + 1e-9;

    const double margin_main = rhs - d;
    const double margin = std::min(margin_main, ordering_margin);

    InequalityReport r;
    r.name = "global_distance";
    r.lhs = d;
    r.rhs = rhs;
    r.margin = margin;
    r.tol = tol;
    r.pass = margin >= -tol;
    r.note = "margin is the min over both inequalities (d_tau <= d and d <= A d_tau + B sqrt(tau) sqrt(d_tau))";
    r.with_input("tau", tau)
        .with_input("A", A)
        .with_input("B", B)
        .with_input("x", point_json(x))
        .with_input("y", point_json(y))
        .with_input("ordering_margin", ordering_margin)
        .with_prov("d", d, m.n == 1 ? "closed-form" : "shooting", d_err)
        .with_prov("d_tau", d_tau, "shooting", d_tau_err);
    return r;
}

std::vector<DistanceSample> collect_distance_samples(const ModelSpace& m,
                                                     const std::vector<PointPair>& pairs,
                                                     const std::vector<double>& tau_grid,
                                                     const ShootOptions& opts) {
    const long long total = static_cast<long long>(pairs.size()) *
                            static_cast<long long>(tau_grid.size());
    struct Slot {
        DistanceSample s;
        bool ok;
    };
    auto slots = map_indexed<Slot>(total, [&](long long idx) {
        Slot sl{};
        const auto& pr = pairs[static_cast<std::size_t>(idx / tau_grid.size())];
        const double tau = tau_grid[static_cast<std::size_t>(idx % tau_grid.size())];
        double d, derr;
        if (m.n == 1) {
            d = closed_form_distance(m, pr.a, pr.b);
            derr = 1e-12 * std::max(1.0, d);
        } else {
            GeodesicResult gr = distance(m, MetricSpec::sub_riemannian(), pr.a, pr.b, opts);
            if (!gr.converged) return sl;
            d = gr.length;
            derr = gr.endpoint_error * std::max(1.0, gr.length) + 1e-9;
        }
        GeodesicResult gt = distance(m, MetricSpec::riemannian(tau), pr.a, pr.b, opts);
        if (!gt.converged) return sl;
        sl.s = DistanceSample{d, gt.length, tau,
                              derr + gt.endpoint_error * std::max(1.0, gt.length) + 1e-9};
        sl.ok = true;
        return sl;
    });

    std::vector<DistanceSample> out;
    out.reserve(slots.size());
    for (const auto& sl : slots)
        if (sl.ok) out.push_back(sl.s);
    return out;
}

FitResult fit_distance_constants(const std::vector<DistanceSample>& samples) {
    FitResult fr;
    fr.sample_description = "distance pairs x tau grid";

    // constraints d <= A u + B v with u = d_tau, v = sqrt(tau) sqrt(d_tau)
    struct C {
        double d, u, v;
    };
    std::vector<C> cs;
    for (const auto& s : samples) {
        if (s.d <= 1e-12 || s.d_tau <= 1e-300) continue;
        cs.push_back({s.d, s.d_tau, std::sqrt(s.tau) * std::sqrt(s.d_tau)});
    }
    fr.sample_size = static_cast<int>(cs.size());
    if (cs.empty()) {
        fr.feasible = true;
        fr.constants["A"] = 1.0;
        fr.constants["B"] = 0.0;
        return fr;
    }

    // prune dominated constraints by axis intercepts
    std::vector<C> keep;
    for (const auto& a : cs) {
        bool dominated = false;
        for (const auto& b : cs) {
            if (&a == &b) continue;
            const double ai_u = a.d / a.u, ai_v = a.d / a.v;
            const double bi_u = b.d / b.u, bi_v = b.d / b.v;
            if (bi_u >= ai_u && bi_v >= ai_v && (bi_u > ai_u || bi_v > ai_v)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) keep.push_back(a);
    }

    auto feasible_at = [&](double A, double B) {
        for (const auto& c : keep) {
            const double slack = A * c.u + B * c.v - c.d;
            if (slack < -1e-9 * std::max(1.0, c.d)) return false;
        }
        return true;
    };

    struct Cand {
        double A, B;
    };
    std::vector<Cand> cands;
    {
        double Amax = 1.0;
        for (const auto& c : keep) Amax = std::max(Amax, c.d / c.u);
        cands.push_back({Amax, 0.0});
        double B1 = 0.0;
        for (const auto& c : keep) B1 = std::max(B1, (c.d - c.u) / c.v);
        cands.push_back({1.0, std::max(0.0, B1)});
        double diag = 1.0;
        for (const auto& c : keep) diag = std::max(diag, c.d / (c.u + c.v));
        cands.push_back({diag, diag});
        for (std::size_t i = 0; i < keep.size(); ++i) {
            for (std::size_t j = i + 1; j < keep.size(); ++j) {
                const double det = keep[i].u * keep[j].v - keep[j].u * keep[i].v;
                if (std::abs(det) < 1e-14) continue;
                const double A = (keep[i].d * keep[j].v - keep[j].d * keep[i].v) / det;
                const double B = (keep[i].u * keep[j].d - keep[j].u * keep[i].d) / det;
                if (A >= 1.0 && B >= 0.0) cands.push_back({A, B});
            }
        }
    }

    bool found = false;
    Cand best{0.0, 0.0};
    auto obj_less = [](const Cand& a, const Cand& b) {
        const double ma = std::max(a.A, a.B), mb = std::max(b.A, b.B);
        if (std::abs(ma - mb) > 1e-12 * std::max(1.0, std::max(ma, mb))) return ma < mb;
        return a.A + a.B < b.A + b.B;
    };
    for (const auto& c : cands) {
        if (!feasible_at(c.A, c.B)) continue;
        if (!found || obj_less(c, best)) {
            best = c;
            found = true;
        }
    }

    fr.feasible = found;
    if (found) {
        fr.constants["A"] = best.A;
        fr.constants["B"] = best.B;
        double viol = 0.0;
        for (const auto& c : cs) viol = std::max(viol, c.d - best.A * c.u - best.B * c.v);
        fr.max_violation = std::max(0.0, viol);
        fr.extra["pruned_constraints"] = static_cast<int>(keep.size());
    }
    return fr;
}

std::vector<PointPair> random_distance_pairs(const ModelSpace& m, int count, std::uint64_t seed,
                                             double box_xy, double box_z) {
    std::vector<PointPair> pairs;
    pairs.reserve(count);
    Xoshiro256ss rng(derive_seed(seed, 0x9a17ULL));
    while (static_cast<int>(pairs.size()) < count) {
        Point a = Point::origin(m), b = Point::origin(m);
        for (int k = 0; k < 2 * m.n; ++k) {
            a.xy[k] = rng.uniform(-box_xy, box_xy);
            b.xy[k] = rng.uniform(-box_xy, box_xy);
        }
        a.z = rng.uniform(-box_z, box_z);
        b.z = rng.uniform(-box_z, box_z);
        const Point q = multiply(m, inverse(m, a), b);
        double sep = std::abs(q.z);
        for (double c : q.xy) sep = std::max(sep, std::abs(c));
        if (sep > 1e-3) pairs.push_back({a, b});
    }
    return pairs;
}

std::vector<PointPair> default_distance_pairs(const ModelSpace& m, int random_count,
                                              std::uint64_t seed) {
    std::vector<PointPair> pairs = random_distance_pairs(m, random_count, seed);
    const Point o = Point::origin(m);
    auto vert = [&](double z) {
        Point b = o;
        b.z = z;
        return PointPair{o, b};
    };
    // vertical family: the extremal direction for the global comparison; the
    // small-z end pins the fitted B against the tau -> inf vertical limit
    for (int k = 0; k < 32; ++k) {
        const double z = 0.005 * std::pow(6.0 / 0.005, static_cast<double>(k) / 31);
        pairs.push_back(vert(z));
        pairs.push_back(vert(-z));
    }
    for (double r : {0.25, 0.5, 1.0, 2.0, 3.0, 4.0}) {
        Point b = o;
        b.xy[0] = r;
        pairs.push_back({o, b});
    }
    // near-vertical perturbations
    for (double z : {0.25, 1.0, 2.5}) {
        Point b = o;
        b.xy[0] = 0.05;
        b.z = z;
        pairs.push_back({o, b});
    }
    return pairs;
}

RegimeReport regime_analysis(const ModelSpace& m, const Point& a, const Point& b, double tau,
                             const std::vector<double>& lambdas, const ShootOptions& opts) {
    RegimeReport rp;
    rp.rows = map_indexed<RegimeRow>(static_cast<long long>(lambdas.size()), [&](long long i) {
        const double lam = lambdas[static_cast<std::size_t>(i)];
        const Point da = dilate(m, lam, a), db = dilate(m, lam, b);
        RegimeRow row{lam, 0.0, 0.0};
        if (m.n == 1) {
            row.d = closed_form_distance(m, da, db);
        } else {
            auto gr = distance(m, MetricSpec::sub_riemannian(), da, db, opts);
            row.d = gr.converged ? gr.length : std::nan("");
        }
        auto gt = distance(m, MetricSpec::riemannian(tau), da, db, opts);
        row.d_tau = gt.converged ? gt.length : std::nan("");
        return row;
    });

    rp.all_converged = true;
    for (const auto& r : rp.rows)
        if (!std::isfinite(r.d) || !std::isfinite(r.d_tau)) rp.all_converged = false;
    if (!rp.all_converged || rp.rows.size() < 4) return rp;

    auto slope_over = [&](double lo, double hi) {
        // least-squares slope of log d against log d_tau for lambda in [lo, hi]
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int k = 0;
        for (const auto& r : rp.rows) {
            if (r.lambda < lo * (1.0 - 1e-12) || r.lambda > hi * (1.0 + 1e-12)) continue;
            const double X = std::log(r.d_tau), Y = std::log(r.d);
            sx += X;
            sy += Y;
            sxx += X * X;
            sxy += X * Y;
            ++k;
        }
        if (k < 2) return std::nan("");
        return (k * sxy - sx * sy) / (k * sxx - sx * sx);
    };

    double lmin = rp.rows.front().lambda, lmax = rp.rows.front().lambda;
    for (const auto& r : rp.rows) {
        lmin = std::min(lmin, r.lambda);
        lmax = std::max(lmax, r.lambda);
    }
    rp.small_scale_slope = slope_over(lmin, lmin * 10.0);
    rp.large_scale_slope = slope_over(lmax / 10.0, lmax);
    return rp;
}

}  // namespace sasaki
