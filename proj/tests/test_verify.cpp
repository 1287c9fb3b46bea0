#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sasaki/config.hpp"
#include "sasaki/quadrature.hpp"
#include "sasaki/rng.hpp"
#include "sasaki/suites.hpp"
#include "sasaki/verify.hpp"

using namespace sasaki;

namespace {
const ModelSpace m1(1);
constexpr double kPi = std::numbers::pi;
const Point kOrigin(0.0, 0.0, 0.0);
}  // namespace

TEST_CASE("HarnackParams invariants and the (t/s)^(n+3) identity") {
    for (int n : {1, 2, 3}) {
        HarnackParams hp(n, 0.7, 0.5, 2.0);
        for (double u : {0.5, 1.0, 1.7, 2.0}) {
            CHECK(hp.a(u) >= 1.0 + 3.0 / n - 1e-15);
            CHECK(hp.b(u) > 0.0);
            CHECK(hp.b(u) / hp.a(u) == doctest::Approx(n * (1.0 + 3.0 / n) / u).epsilon(1e-14));
        }
        // closed-form int_s^t b/a du against numeric quadrature
        auto q = integrate([&](double u) { return hp.b(u) / hp.a(u); }, hp.s, hp.t);
        CHECK(q.converged);
        CHECK(std::abs(q.value - hp.log_time_factor()) <= 1e-12 * std::max(1.0, q.value));
    }
    CHECK_THROWS_AS(HarnackParams(1, 1.0, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(HarnackParams(1, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("check_cd examples") {
    const int nv = m1.real_dim();
    ScalarField fx = ScalarField::polynomial(Polynomial::variable(nv, 0));
    ScalarField fz = ScalarField::polynomial(Polynomial::variable(nv, var_z(m1)));

    auto r1 = check_cd(m1, fx, Point(0.3, 0.4, 0.5), 1.0);
    CHECK(r1.pass);
    CHECK(r1.margin == doctest::Approx(1.0).epsilon(1e-13));

    auto r2 = check_cd(m1, fz, kOrigin, 1.0);
    CHECK(r2.pass);
    CHECK(std::abs(r2.margin) <= 1e-14);  // sharp

    auto r3 = check_cd(m1, fz, Point(2, 0, 0), 1.0);
    CHECK(r3.pass);
    CHECK(r3.margin == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("check_liyau on representative points") {
    auto origin = check_liyau(m1, 1.0, kOrigin);
    CHECK(origin.pass);
    CHECK(origin.lhs <= 1e-12);                                  // symmetry kills the lhs
    CHECK(origin.rhs == doctest::Approx(8.0).epsilon(1e-9));     // 4*(-2) + 16

    auto horiz = check_liyau(m1, 1.0, Point(1, 0, 0));
    CHECK(horiz.pass);
    CHECK(horiz.margin > 0.0);

    auto stress = check_liyau(m1, 0.05, Point(0, 0, 0.5));
    CHECK(stress.pass);
}

TEST_CASE("check_scaled_liyau: tau limits and internal identities") {
    const double t = 1.0;
    const Point y(1, 0, 0.2);
    auto base = check_liyau(m1, t, y);
    auto tau0 = check_scaled_liyau(m1, t, y, 0.0);
    CHECK(tau0.pass);
    CHECK(tau0.rhs == doctest::Approx(base.rhs).epsilon(1e-12));
    CHECK(tau0.lhs <= base.lhs + 1e-12);  // drops the Reeb term

    auto tau1 = check_scaled_liyau(m1, t, y, 1.0);
    CHECK(tau1.pass);

    // tau^2 = n t / 3 reproduces the Li-Yau lhs weights and doubles the rhs
    const double tau_id = std::sqrt(m1.n * t / 3.0);
    auto rid = check_scaled_liyau(m1, t, y, tau_id);
    CHECK(rid.pass);
    CHECK(rid.lhs == doctest::Approx(base.lhs).epsilon(1e-10));
    CHECK(rid.rhs == doctest::Approx(2.0 * base.rhs).epsilon(1e-10));
}

TEST_CASE("check_harnack: degenerate, continuity, generic") {
    ShootOptions shoot;
    const Point x = kOrigin, y(0.5, 0.2, 0.1);

    auto deg = check_harnack(m1, 1.0, 2.0, x, y, y, 1.0, shoot);
    CHECK(deg.pass);
    CHECK(deg.margin >= 0.0);
    // with y = z the factor collapses to (t/s)^{n+3} = 16
    const double p1 = deg.provenance.at("p(s,x,y)").value;
    const double p2 = deg.provenance.at("p(t,x,z)").value;
    CHECK(deg.rhs == doctest::Approx(16.0 * p2).epsilon(1e-12));
    CHECK(p1 <= 16.0 * p2);

    auto cont = check_harnack(m1, 1.999, 2.0, x, y, y, 1.0, shoot);
    CHECK(cont.pass);
    CHECK(cont.margin >= 0.0);
    CHECK(cont.margin <= 0.01 * std::max(cont.lhs, cont.rhs));  // both sides converge

    auto gen = check_harnack(m1, 0.5, 1.0, kOrigin, Point(1, 0, 0), Point(0, 1, 0.3), 1.0, shoot);
    CHECK(gen.pass);
    CHECK(gen.note.find("misprint") != std::string::npos);

    CHECK_THROWS_AS(check_harnack(m1, 1.0, 0.5, x, y, y, 1.0, shoot), std::invalid_argument);
    CHECK_THROWS_AS(check_harnack(m1, 0.5, 1.0, x, y, y, 0.0, shoot), std::invalid_argument);
}

TEST_CASE("gaussian fit: diagonal lower bound, feasibility, eps monotonicity") {
    // diagonal-only grid: the sandwich pinches to C^-1 <= pV <= C so C >= 1
    std::vector<GaussianGridPoint> diag;
    for (double t : logspace(0.1, 10.0, 8)) diag.push_back({t, kOrigin});
    auto fd = fit_gaussian_constants(m1, diag, 0.5);
    CHECK(fd.feasible);
    CHECK(fd.constants.at("C") >= 1.0);

    // small mixed grid
    std::vector<GaussianGridPoint> grid;
    for (double t : logspace(0.2, 5.0, 6)) {
        grid.push_back({t, kOrigin});
        grid.push_back({t, dilate(m1, std::sqrt(t), Point(1, 0, 0))});
        grid.push_back({t, dilate(m1, std::sqrt(t), Point(0, 0, 0.5))});
        grid.push_back({t, dilate(m1, std::sqrt(t), Point(0.8, -0.5, 0.3))});
    }
    double prevC = -1.0;
    for (double eps : {0.1, 0.5, 1.0}) {
        auto fr = fit_gaussian_constants(m1, grid, eps);
        CHECK(fr.feasible);
        const double C = fr.constants.at("C");
        CHECK(C >= 1.0);
        if (prevC > 0.0) CHECK(C <= prevC * (1.0 + 1e-9));  // relaxing eps shrinks minimal C
        prevC = C;
    }
    CHECK_THROWS_AS(fit_gaussian_constants(m1, grid, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fit_gaussian_constants(m1, grid, 1.5), std::invalid_argument);
}

TEST_CASE("check_global_distance cases") {
    ShootOptions shoot;
    // coincident points: everything zero
    auto same = check_global_distance(m1, Point(1, 1, 1), Point(1, 1, 1), 1.0, 1.0, 0.0, shoot);
    CHECK(same.pass);

    // horizontal pair: d = d_tau exactly, so A = 1, B = 0 suffices
    auto horiz = check_global_distance(m1, kOrigin, Point(2, 0, 0), 0.5, 1.0, 0.0, shoot);
    CHECK(horiz.pass);
    CHECK(horiz.lhs == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(horiz.rhs == doctest::Approx(2.0).epsilon(1e-7));

    // vertical pair at tau = 1: d = 2 sqrt(pi), d_tau <= 1; generous constants pass
    auto vert = check_global_distance(m1, kOrigin, Point(0, 0, 1), 1.0, 1.0, 2.0 * std::sqrt(kPi), shoot);
    const double d_tau = vert.provenance.at("d_tau").value;
    CHECK(d_tau <= 1.0 + 1e-9);
    CHECK(vert.lhs == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-10));
    CHECK(vert.pass);

    // too-small constants fail honestly
    auto fail = check_global_distance(m1, kOrigin, Point(0, 0, 1), 1.0, 1.0, 0.5, shoot);
    CHECK_FALSE(fail.pass);
}

TEST_CASE("fit_distance_constants: horizontal sample gives A = 1, B = 0") {
    ShootOptions shoot;
    std::vector<PointPair> pairs;
    for (double r : {0.5, 1.0, 2.0, 3.0}) pairs.push_back({kOrigin, Point(r, 0, 0)});
    auto samples = collect_distance_samples(m1, pairs, {0.1, 1.0, 10.0}, shoot);
    REQUIRE(samples.size() == pairs.size() * 3);
    auto fit = fit_distance_constants(samples);
    REQUIRE(fit.feasible);
    CHECK(fit.constants.at("A") == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.constants.at("B") <= 1e-5);
}

TEST_CASE("fit_distance_constants: vertical dilation family is feasible with finite constants") {
    ShootOptions shoot;
    std::vector<PointPair> pairs;
    for (double lam : logspace(0.3, 3.0, 7)) {
        pairs.push_back({kOrigin, dilate(m1, lam, Point(0, 0, 1))});
    }
    auto samples = collect_distance_samples(m1, pairs, logspace(0.01, 100.0, 7), shoot);
    REQUIRE(samples.size() == pairs.size() * 7);
    auto fit = fit_distance_constants(samples);
    REQUIRE(fit.feasible);
    CHECK(fit.constants.at("A") >= 1.0);
    CHECK(fit.constants.at("B") > 0.0);
    CHECK(fit.constants.at("B") <= 2.0 * std::sqrt(kPi) * 1.05);  // the tau -> inf vertical limit
    CHECK(fit.max_violation <= 1e-9);
}

TEST_CASE("fitted constants transfer to fresh mixed samples") {
    ShootOptions shoot;
    auto train_pairs = default_distance_pairs(m1, 30, 11111);
    auto train = collect_distance_samples(m1, train_pairs, logspace(0.01, 100.0, 5), shoot);
    auto fit = fit_distance_constants(train);
    REQUIRE(fit.feasible);
    const double A = fit.constants.at("A"), B = fit.constants.at("B");

    auto hold_pairs = random_distance_pairs(m1, 25, 22222);
    auto hold = collect_distance_samples(m1, hold_pairs, logspace(0.01, 100.0, 5), shoot);
    REQUIRE(hold.size() == hold_pairs.size() * 5);
    for (const auto& s : hold) {
        const double v = std::sqrt(s.tau) * std::sqrt(s.d_tau);
        CHECK(s.d <= A * s.d_tau + B * v + 1e-5 * std::max(1.0, s.d) + 10.0 * s.solver_err);
    }
}

TEST_CASE("regime analysis: horizontal pairs stay on the diagonal") {
    ShootOptions shoot;
    auto rr = regime_analysis(m1, kOrigin, Point(1, 0, 0), 1.0, logspace(0.1, 10.0, 7), shoot);
    REQUIRE(rr.all_converged);
    for (const auto& row : rr.rows) {
        CHECK(row.d == doctest::Approx(row.d_tau).epsilon(1e-6));
    }
    CHECK(rr.small_scale_slope == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rr.large_scale_slope == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("suite plumbing: exit codes and feasibility accounting") {
    SuiteResult r;
    r.suite = "demo";
    r.instances.push_back(InequalityReport::make("ok", 0.0, 1.0, 0.1));
    CHECK(suite_exit_code(r) == 0);
    r.instances.push_back(InequalityReport::make("bad", 1.0, 0.0, 0.1));
    CHECK(suite_exit_code(r) == 1);
    r.instances.push_back(InequalityReport::failure("broken", "diverged"));
    CHECK(suite_exit_code(r) == 3);
    CHECK(r.passed() == 1);
    CHECK(r.failed() == 1);
    CHECK(r.errors() == 1);
}

TEST_CASE("report invariant: pass iff margin >= -tol") {
    auto a = InequalityReport::make("x", 1.0, 1.0 - 1e-12, 1e-10);
    CHECK(a.pass);
    auto b = InequalityReport::make("x", 1.0, 0.5, 1e-10);
    CHECK_FALSE(b.pass);
    CHECK(b.margin == doctest::Approx(-0.5));
}
