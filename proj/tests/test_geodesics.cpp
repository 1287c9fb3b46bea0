#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "sasaki/geodesics.hpp"
#include "sasaki/rng.hpp"

using namespace sasaki;

namespace {

const ModelSpace m1(1);
constexpr double kPi = std::numbers::pi;

// Independent closed-form endpoint of the geodesic flow from the origin:
// the momentum pair (u,v) rotates at rate w = pz, so with eta0 = u0 + i v0
// the horizontal endpoint is eta0 (e^{iwt} - 1)/(iw) and the vertical one is
// |eta0|^2 (wt - sin wt)/(2 w^2) + tau^2 w t.
Point exact_flow_endpoint(double u0, double v0, double w, double tau, double t) {
    std::complex<double> eta(u0, v0);
    std::complex<double> zeta;
    double zv;
    if (std::abs(w) < 1e-12) {
        zeta = eta * t;
        zv = 0.0;
    } else {
        const std::complex<double> iw(0.0, w);
        zeta = eta * (std::exp(iw * t) - 1.0) / iw;
        zv = std::norm(eta) * (w * t - std::sin(w * t)) / (2.0 * w * w);
    }
    zv += tau * tau * w * t;
    return Point(zeta.real(), zeta.imag(), zv);
}

}  // namespace

TEST_CASE("hamiltonian values") {
    CHECK(hamiltonian(m1, MetricSpec::sub_riemannian(), Point(0, 0, 0), Covector(1, 0, 0)) == 0.5);
    CHECK(hamiltonian(m1, MetricSpec::riemannian(2.0), Point(0, 0, 0), Covector(0, 0, 1)) == 2.0);
    // H_tau >= H_SR, with equality as tau -> 0
    const Point p(0.3, -0.8, 0.1);
    const Covector pv(0.4, 1.2, -0.7);
    const double hsr = hamiltonian(m1, MetricSpec::sub_riemannian(), p, pv);
    for (double tau : {1.0, 0.1, 1e-3, 1e-6}) {
        const double ht = hamiltonian(m1, MetricSpec::riemannian(tau), p, pv);
        CHECK(ht >= hsr);
        CHECK(ht - hsr == doctest::Approx(0.5 * tau * tau * pv.pz * pv.pz).epsilon(1e-12));
    }
}

TEST_CASE("integrate: straight horizontal line") {
    auto path = integrate(m1, MetricSpec::sub_riemannian(), Point(0, 0, 0), Covector(1, 0, 0), 1.0, 512);
    const Point& end = path.back().q;
    CHECK(std::abs(end.xy[0] - 1.0) <= 1e-10);
    CHECK(std::abs(end.xy[1]) <= 1e-12);
    CHECK(std::abs(end.z) <= 1e-12);
    CHECK(path.size() == 513);
    CHECK_THROWS_AS(integrate(m1, MetricSpec::sub_riemannian(), Point(0, 0, 0), Covector(1, 0, 0), 1.0, 8),
                    std::invalid_argument);
}

TEST_CASE("integrate: energy conservation on random data") {
    Xoshiro256ss rng(314);
    for (int it = 0; it < 20; ++it) {
        Point p0(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        Covector pv0(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        const MetricSpec spec = (it % 2 == 0) ? MetricSpec::sub_riemannian() : MetricSpec::riemannian(0.5);
        // normalize to unit speed
        const double h0 = hamiltonian(m1, spec, p0, pv0);
        const double s = 1.0 / std::sqrt(2.0 * h0);
        pv0.pxy[0] *= s;
        pv0.pxy[1] *= s;
        pv0.pz *= s;
        auto path = integrate(m1, spec, p0, pv0, 1.0, 512);
        const double hs = hamiltonian(m1, spec, path.front().q, path.front().pv);
        const double he = hamiltonian(m1, spec, path.back().q, path.back().pv);
        CHECK(std::abs(he - hs) <= 1e-10 * std::max(1.0, hs));
    }
}

TEST_CASE("integrate matches the explicit rotating-momentum solution") {
    Xoshiro256ss rng(2718);
    for (int it = 0; it < 12; ++it) {
        const double u0 = rng.uniform(-1.5, 1.5), v0 = rng.uniform(-1.5, 1.5);
        const double w = rng.uniform(-5.0, 5.0);
        const double tau = (it % 3 == 0) ? 0.0 : rng.uniform(0.1, 2.0);
        const MetricSpec spec = tau == 0.0 ? MetricSpec::sub_riemannian() : MetricSpec::riemannian(tau);
        auto end = integrate_endpoint(m1, spec, Point(0, 0, 0), Covector(u0, v0, w), 1.0, 512);
        const Point oracle = exact_flow_endpoint(u0, v0, w, tau, 1.0);
        // RK4 at 512 steps: coordinate-wise agreement with the exact flow
        CHECK(std::abs(end.q.xy[0] - oracle.xy[0]) <= 1e-8);
        CHECK(std::abs(end.q.xy[1] - oracle.xy[1]) <= 1e-8);
        CHECK(std::abs(end.q.z - oracle.z) <= 1e-8);
        // momentum stays on the rotation circle
        CHECK(end.pv.pz == doctest::Approx(w).epsilon(1e-14));
    }
}

TEST_CASE("distance examples") {
    ShootOptions opts;
    // horizontal straight line
    for (double r : {0.5, 1.0, 2.5}) {
        auto res = distance(m1, MetricSpec::sub_riemannian(), Point(0, 0, 0), Point(r, 0, 0), opts);
        REQUIRE(res.converged);
        CHECK(res.length == doctest::Approx(r).epsilon(1e-9));
    }
    // full circle to the vertical axis
    auto v = distance(m1, MetricSpec::sub_riemannian(), Point(0, 0, 0), Point(0, 0, 1), opts);
    REQUIRE(v.converged);
    CHECK(v.length == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-9));
    CHECK(v.length == doctest::Approx(closed_form_distance(m1, Point(0, 0, 0), Point(0, 0, 1)))
                          .epsilon(1e-9));
    // Riemannian horizontal: projection argument makes it r for every tau
    for (double tau : {0.1, 1.0, 10.0}) {
        auto res = distance(m1, MetricSpec::riemannian(tau), Point(0, 0, 0), Point(1.5, 0, 0), opts);
        REQUIRE(res.converged);
        CHECK(res.length == doctest::Approx(1.5).epsilon(1e-8));
    }
    // coincident endpoints short-circuit
    auto zero = distance(m1, MetricSpec::sub_riemannian(), Point(1, 2, 3), Point(1, 2, 3), opts);
    CHECK(zero.converged);
    CHECK(zero.length == 0.0);
}

TEST_CASE("distance failure is explicit") {
    ShootOptions opts;
    opts.max_newton_iters = 0;
    opts.max_restarts = 0;
    auto res = distance(m1, MetricSpec::sub_riemannian(), Point(0, 0, 0), Point(0.3, 0.4, 0.2), opts);
    CHECK_FALSE(res.converged);
}

TEST_CASE("closed form: examples and homogeneity") {
    CHECK(closed_form_distance(m1, Point(0, 0, 0), Point(2, 0, 0)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(closed_form_distance(m1, Point(0, 0, 0), Point(0, 0, 0.7)) ==
          doctest::Approx(2.0 * std::sqrt(kPi * 0.7)).epsilon(1e-12));
    Xoshiro256ss rng(13);
    for (int it = 0; it < 50; ++it) {
        Point q(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        const double lam = std::exp(rng.uniform(-2.0, 2.0));
        const double d1 = closed_form_distance(m1, Point(0, 0, 0), dilate(m1, lam, q));
        const double d2 = lam * closed_form_distance(m1, Point(0, 0, 0), q);
        CHECK(d1 == doctest::Approx(d2).epsilon(1e-11));
    }
    ModelSpace m2(2);
    Point a = Point::origin(m2), b = Point::origin(m2);
    b.xy[0] = 1.0;
    CHECK_THROWS_AS(closed_form_distance(m2, a, b), std::invalid_argument);
}

TEST_CASE("shooting agrees with the closed form on random pairs") {
    ShootOptions opts;
    Xoshiro256ss rng(555);
    for (int it = 0; it < 12; ++it) {
        Point a(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
        Point b(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
        const double ref = closed_form_distance(m1, a, b);
        if (ref < 1e-3) continue;
        auto res = distance(m1, MetricSpec::sub_riemannian(), a, b, opts);
        REQUIRE(res.converged);
        CHECK(std::abs(res.length - ref) / ref <= 1e-6);
    }
}

TEST_CASE("dilation identities") {
    ShootOptions opts;
    {
        auto [sr, tau] = dilation_identity_check(m1, Point(0.2, -0.4, 0.1), Point(1, 0.5, -0.6), 1.0, 1.0, opts);
        CHECK(sr.pass);
        CHECK(tau.pass);
    }
    {
        auto [sr, tau] = dilation_identity_check(m1, Point(0, 0, 0), Point(0.8, -0.2, 0.5), 2.0, 1.0, opts);
        CHECK(sr.pass);
        CHECK(tau.pass);
    }
    {
        auto [sr, tau] = dilation_identity_check(m1, Point(0, 0, 0), Point(0.5, 0.5, 0.3), 10.0, 0.5, opts);
        CHECK(sr.pass);            // closed-form route, 1e-12
        CHECK(sr.lhs <= 1e-11);    // |difference|
        CHECK(tau.pass);
    }
    CHECK_THROWS_AS(dilation_identity_check(m1, Point(0, 0, 0), Point(1, 0, 0), -1.0, 1.0, opts),
                    std::invalid_argument);
}

TEST_CASE("metric ordering, monotonicity in tau, triangle inequality") {
    ShootOptions opts;
    Xoshiro256ss rng(77);
    const std::vector<double> taus = {1.0, 0.5, 0.25, 0.125};
    for (int it = 0; it < 5; ++it) {
        Point a(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-1, 1));
        Point b(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-1, 1));
        const double d = closed_form_distance(m1, a, b);
        if (d < 0.2) continue;
        double prev = -1.0;
        double last_gap = 1e300;
        for (double tau : taus) {
            auto res = distance(m1, MetricSpec::riemannian(tau), a, b, opts);
            REQUIRE(res.converged);
            CHECK(res.length <= d * (1.0 + 1e-6));
            if (prev >= 0.0) CHECK(res.length >= prev * (1.0 - 1e-9));  // smaller tau, larger d_tau
            prev = res.length;
            const double gap = d - res.length;
            CHECK(gap <= last_gap * (1.0 + 1e-6));
            last_gap = gap;
        }
    }
    // triangle inequality through a waypoint
    for (int it = 0; it < 5; ++it) {
        Point a(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1, 1));
        Point b(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1, 1));
        Point c(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1, 1));
        const double ab = closed_form_distance(m1, a, b);
        const double ac = closed_form_distance(m1, a, c);
        const double cb = closed_form_distance(m1, c, b);
        CHECK(ab <= ac + cb + 1e-10);
        auto rab = distance(m1, MetricSpec::riemannian(0.7), a, b, opts);
        auto rac = distance(m1, MetricSpec::riemannian(0.7), a, c, opts);
        auto rcb = distance(m1, MetricSpec::riemannian(0.7), c, b, opts);
        REQUIRE((rab.converged && rac.converged && rcb.converged));
        CHECK(rab.length <= rac.length + rcb.length + 1e-6);
    }
}

TEST_CASE("distance determinism for a fixed seed") {
    ShootOptions opts;
    opts.seed = 99;
    const Point a(0.1, 0.2, 0.3), b(-0.7, 1.1, -0.4);
    auto r1 = distance(m1, MetricSpec::riemannian(0.3), a, b, opts);
    auto r2 = distance(m1, MetricSpec::riemannian(0.3), a, b, opts);
    CHECK(r1.length == r2.length);
    CHECK(r1.initial_covector.pxy == r2.initial_covector.pxy);
    CHECK(r1.initial_covector.pz == r2.initial_covector.pz);
}
