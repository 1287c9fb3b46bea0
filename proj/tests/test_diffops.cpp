#include <doctest.h>

#include <cmath>

#include "sasaki/diffops.hpp"
#include "sasaki/polynomial.hpp"
#include "sasaki/rng.hpp"
#include "sasaki/scalar_field.hpp"

using namespace sasaki;

namespace {

const ModelSpace m1(1);

Polynomial var(const ModelSpace& m, int idx) { return Polynomial::variable(m.real_dim(), idx); }

ScalarField poly_field(const Polynomial& p) { return ScalarField::polynomial(p); }

Polynomial random_poly(const ModelSpace& m, int max_degree, std::uint64_t seed, int terms) {
    Xoshiro256ss rng(seed);
    Polynomial p(m.real_dim());
    for (int t = 0; t < terms; ++t) {
        Polynomial::Exponents e(m.real_dim(), 0);
        const int deg = static_cast<int>(rng.next() % (max_degree + 1));
        for (int d = 0; d < deg; ++d) e[rng.next() % m.real_dim()] += 1;
        p.add_term(e, rng.uniform(-1.0, 1.0));
    }
    return p;
}

Point rand_point(Xoshiro256ss& rng, const ModelSpace& m, double box) {
    Point p = Point::origin(m);
    for (auto& c : p.xy) c = rng.uniform(-box, box);
    p.z = rng.uniform(-box, box);
    return p;
}

}  // namespace

TEST_CASE("horizontal gradient examples") {
    auto fx = poly_field(var(m1, var_x(m1, 0)));
    auto g = horizontal_gradient(m1, fx, Point(0.7, -0.3, 2.0));
    CHECK(g.values[0] == 1.0);
    CHECK(g.values[1] == 0.0);
    CHECK(g.est_error == 0.0);

    auto fz = poly_field(var(m1, var_z(m1)));
    auto gz = horizontal_gradient(m1, fz, Point(0.8, -0.4, 0.0));
    CHECK(gz.values[0] == doctest::Approx(0.2).epsilon(1e-15));   // -y/2
    CHECK(gz.values[1] == doctest::Approx(0.4).epsilon(1e-15));   // x/2
}

TEST_CASE("FD and exact paths agree with order >= 1.9") {
    Polynomial p = random_poly(m1, 3, 99, 10);
    ScalarField exact = poly_field(p);
    const Point x(0.42, -0.13, 0.77);
    auto gx = horizontal_gradient(m1, exact, x);
    auto lap = sublaplacian(m1, exact, x);

    std::vector<double> gerr, lerr;
    for (double h : {2e-2, 1e-2, 5e-3, 2.5e-3}) {
        ScalarField fd = ScalarField::callable([&p](const Point& q) { return p.evaluate(coords_of(q)); }, h);
        auto gf = horizontal_gradient(m1, fd, x);
        gerr.push_back(std::max(std::abs(gf.values[0] - gx.values[0]),
                                std::abs(gf.values[1] - gx.values[1])));
        auto lf = sublaplacian(m1, fd, x);
        lerr.push_back(std::abs(lf.value - lap.value));
        CHECK(gf.est_error >= 0.0);
        CHECK(lf.scheme == Scheme::FiniteDifference);
    }
    for (std::size_t i = 0; i + 1 < gerr.size(); ++i) {
        CHECK(std::log2(gerr[i] / gerr[i + 1]) >= 1.9);
        CHECK(std::log2(lerr[i] / lerr[i + 1]) >= 1.9);
    }
}

TEST_CASE("sublaplacian examples") {
    Polynomial x = var(m1, 0), y = var(m1, 1), z = var(m1, 2);
    CHECK(sublaplacian(m1, poly_field(x * x + y * y), Point(3, -1, 4)).value == 4.0);
    CHECK(sublaplacian(m1, poly_field(z), Point(3, -1, 4)).value == 0.0);
}

TEST_CASE("reeb derivative examples") {
    CHECK(reeb_derivative(m1, poly_field(var(m1, 2)), Point(1, 2, 3)).value == 1.0);
    CHECK(reeb_derivative(m1, poly_field(var(m1, 0)), Point(1, 2, 3)).value == 0.0);

    Polynomial p = random_poly(m1, 4, 17, 12);
    ScalarField fd = ScalarField::callable([&p](const Point& q) { return p.evaluate(coords_of(q)); }, 1e-5);
    const Point pt(0.3, 0.9, -0.2);
    const double exact = reeb_derivative(m1, poly_field(p), pt).value;
    const double approx = reeb_derivative(m1, fd, pt).value;
    CHECK(approx == doctest::Approx(exact).epsilon(1e-7));
}

TEST_CASE("gamma2 examples") {
    Polynomial x = var(m1, 0), z = var(m1, 2);
    // f = x: gradient is constant, Df = 0
    CHECK(gamma2(m1, poly_field(x), Point(0.5, 0.7, -2)).value == 0.0);
    // f = z: |grad_H z|^2 = (x^2+y^2)/4 whose sub-Laplacian is 1
    CHECK(gamma2(m1, poly_field(z), Point(0.5, 0.7, -2)).value == doctest::Approx(0.5).epsilon(1e-15));
    // f = x^2
    CHECK(gamma2(m1, poly_field(x * x), Point(1.5, -0.7, 2)).value == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("gamma2_T examples") {
    Polynomial x = var(m1, 0), z = var(m1, 2);
    CHECK(gamma2_T(m1, poly_field(z), Point(1, 2, 3)).value == 0.0);
    CHECK(gamma2_T(m1, poly_field(x), Point(1, 2, 3)).value == 0.0);
    // f = x z: Tf = x, D(x^2) = 2, D(xz) = -y so T(D f) = 0
    CHECK(gamma2_T(m1, poly_field(x * z), Point(0.4, -1.0, 0.3)).value ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Killing identity residual vanishes") {
    Polynomial x = var(m1, 0), y = var(m1, 1), z = var(m1, 2);
    CHECK(killing_identity_residual(m1, poly_field(z), Point(1, -1, 2)).value == 0.0);
    CHECK(std::abs(killing_identity_residual(m1, poly_field(x * y * z), Point(0.7, 0.3, -0.9)).value) <=
          1e-12);

    Xoshiro256ss rng(5);
    for (int it = 0; it < 40; ++it) {
        Polynomial p = random_poly(m1, 4, 1000 + it, 12);
        Point pt = rand_point(rng, m1, 1.5);
        CHECK(std::abs(killing_identity_residual(m1, poly_field(p), pt).value) <= 1e-10);
    }
}

TEST_CASE("cd residual examples") {
    Polynomial x = var(m1, 0), z = var(m1, 2);
    // f = x: Gamma2 = Gamma2T = Df = Tf = 0, |grad|^2 = 1
    for (double nu : {0.1, 1.0, 10.0}) {
        CHECK(cd_residual(m1, poly_field(x), Point(2, 3, -1), nu).value ==
              doctest::Approx(1.0 / nu).epsilon(1e-14));
    }
    // f = z at origin: sharp case
    CHECK(std::abs(cd_residual(m1, poly_field(z), Point(0, 0, 0), 1.0).value) <= 1e-15);
    CHECK(std::abs(cd_residual(m1, poly_field(z), Point(0, 0, 0), 0.37).value) <= 1e-15);
    // f = z elsewhere: residual = (x^2+y^2)/(4 nu)
    CHECK(cd_residual(m1, poly_field(z), Point(2, 0, 0), 1.0).value ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cd_residual(m1, poly_field(z), Point(1, 2, 5), 2.0).value ==
          doctest::Approx(5.0 / 8.0).epsilon(1e-14));

    CHECK_THROWS_AS(cd_residual(m1, poly_field(z), Point(0, 0, 0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cd_residual(m1, poly_field(z), Point(0, 0, 0), -1.0), std::invalid_argument);
}

TEST_CASE("cd residual is nonnegative over random polynomial families") {
    Xoshiro256ss rng(2024);
    std::vector<Point> pts;
    for (int i = 0; i < 40; ++i) pts.push_back(rand_point(rng, m1, 1.5));
    for (int pi = 0; pi < 12; ++pi) {
        Polynomial p = random_poly(m1, 5, 31 * pi + 7, 14);
        ScalarField f = poly_field(p);
        for (const auto& pt : pts) {
            for (double nu : {0.1, 1.0, 10.0}) {
                CHECK(cd_residual(m1, f, pt, nu).value >= -1e-10);
            }
        }
    }
    // n = 2 spot check
    ModelSpace m2(2);
    Xoshiro256ss rng2(77);
    for (int pi = 0; pi < 4; ++pi) {
        Polynomial p = random_poly(m2, 4, 900 + pi, 10);
        ScalarField f = poly_field(p);
        for (int i = 0; i < 10; ++i) {
            Point pt = rand_point(rng2, m2, 1.0);
            CHECK(cd_residual(m2, f, pt, 1.0).value >= -1e-10);
        }
    }
}

TEST_CASE("gamma2 of horizontal-affine functions") {
    // affine in (x, y) with no vertical dependence: Gamma2 >= 0, zero for
    // coordinate functions
    Polynomial x = var(m1, 0), y = var(m1, 1);
    Polynomial aff = x * 2.0 - y * 3.0 + Polynomial::constant(3, 1.5);
    Xoshiro256ss rng(8);
    for (int i = 0; i < 20; ++i) {
        Point p = rand_point(rng, m1, 2.0);
        CHECK(gamma2(m1, poly_field(aff), p).value >= -1e-12);
    }
    CHECK(gamma2(m1, poly_field(x), Point(1, 1, 1)).value == 0.0);
    CHECK(gamma2(m1, poly_field(y), Point(1, 1, 1)).value == 0.0);
}

TEST_CASE("FD path of gamma2 tracks the exact value") {
    Polynomial p = random_poly(m1, 3, 55, 8);
    const Point pt(0.35, -0.6, 0.4);
    const double exact = gamma2(m1, poly_field(p), pt).value;
    ScalarField fd = ScalarField::callable([&p](const Point& q) { return p.evaluate(coords_of(q)); }, 1e-4);
    auto r = gamma2(m1, fd, pt);
    CHECK(std::abs(r.value - exact) <= std::max(1e-4, 20.0 * r.est_error));
    CHECK(r.est_error > 0.0);
}

TEST_CASE("FD step underflow is flagged") {
    ScalarField f = ScalarField::callable([](const Point& q) { return q.xy[0]; }, 1e-18);
    CHECK_THROWS_AS(horizontal_gradient(m1, f, Point(1, 1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(ScalarField::callable([](const Point&) { return 0.0; }, 0.0),
                    std::invalid_argument);
}
