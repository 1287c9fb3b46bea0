#include <doctest.h>

#include <cmath>

#include "sasaki/core.hpp"
#include "sasaki/geodesics.hpp"
#include "sasaki/rng.hpp"

using namespace sasaki;

namespace {
Point pt(double x, double y, double z) { return Point(x, y, z); }

double max_abs_diff(const Point& a, const Point& b) {
    double m = std::abs(a.z - b.z);
    for (std::size_t k = 0; k < a.xy.size(); ++k) m = std::max(m, std::abs(a.xy[k] - b.xy[k]));
    return m;
}
}  // namespace

TEST_CASE("group law: identity, stated product, commutator") {
    ModelSpace m(1);
    CHECK(max_abs_diff(multiply(m, pt(0, 0, 0), pt(1, 2, 3)), pt(1, 2, 3)) == 0.0);
    CHECK(max_abs_diff(multiply(m, pt(1, 2, 3), pt(0, 0, 0)), pt(1, 2, 3)) == 0.0);

    // omega((1,0),(0,1)) = 1 so the product picks up z = 1/2
    CHECK(max_abs_diff(multiply(m, pt(1, 0, 0), pt(0, 1, 0)), pt(1, 1, 0.5)) == 0.0);

    // group commutator realizes the bracket direction T
    const Point p = pt(1, 0, 0), q = pt(0, 1, 0);
    Point c = multiply(m, multiply(m, multiply(m, p, q), inverse(m, p)), inverse(m, q));
    CHECK(max_abs_diff(c, pt(0, 0, 1)) <= 1e-15);
}

TEST_CASE("inverse is negation in exponential coordinates") {
    ModelSpace m(1);
    CHECK(max_abs_diff(inverse(m, pt(0, 0, 0)), pt(0, 0, 0)) == 0.0);
    CHECK(max_abs_diff(inverse(m, pt(1, 2, 3)), pt(-1, -2, -3)) == 0.0);
    CHECK(max_abs_diff(multiply(m, pt(1, 1, 1), inverse(m, pt(1, 1, 1))), pt(0, 0, 0)) <= 1e-14);
}

TEST_CASE("associativity on random triples") {
    ModelSpace m(2);
    Xoshiro256ss rng(42);
    for (int it = 0; it < 200; ++it) {
        Point a = Point::origin(m), b = Point::origin(m), c = Point::origin(m);
        for (int k = 0; k < 4; ++k) {
            a.xy[k] = rng.uniform(-2, 2);
            b.xy[k] = rng.uniform(-2, 2);
            c.xy[k] = rng.uniform(-2, 2);
        }
        a.z = rng.uniform(-2, 2);
        b.z = rng.uniform(-2, 2);
        c.z = rng.uniform(-2, 2);
        Point l = multiply(m, multiply(m, a, b), c);
        Point r = multiply(m, a, multiply(m, b, c));
        CHECK(max_abs_diff(l, r) <= 1e-12);
    }
}

TEST_CASE("dilations: definition, automorphism property, rejection") {
    ModelSpace m(1);
    CHECK(max_abs_diff(dilate(m, 1.0, pt(0.3, -0.7, 0.2)), pt(0.3, -0.7, 0.2)) == 0.0);
    CHECK(max_abs_diff(dilate(m, 2.0, pt(1, 1, 1)), pt(2, 2, 4)) == 0.0);

    Xoshiro256ss rng(7);
    for (int it = 0; it < 50; ++it) {
        Point p = pt(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        Point q = pt(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        Point l = dilate(m, 3.0, multiply(m, p, q));
        Point r = multiply(m, dilate(m, 3.0, p), dilate(m, 3.0, q));
        CHECK(max_abs_diff(l, r) <= 1e-12);
    }
    CHECK_THROWS_AS(dilate(m, 0.0, pt(1, 0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(dilate(m, -1.0, pt(1, 0, 0)), std::invalid_argument);
}

TEST_CASE("frame components at a point") {
    ModelSpace m(1);
    Frame f0 = frame_at(m, pt(0, 0, 0));
    CHECK(f0.horizontal[0] == std::vector<double>{1, 0, 0});
    CHECK(f0.horizontal[1] == std::vector<double>{0, 1, 0});
    CHECK(f0.reeb == std::vector<double>{0, 0, 1});

    Frame f = frame_at(m, pt(0.4, -1.2, 3.0));
    CHECK(f.horizontal[0] == std::vector<double>{1, 0, 0.6});     // X = d/dx - (y/2) d/dz
    CHECK(f.horizontal[1] == std::vector<double>{0, 1, 0.2});     // Y = d/dy + (x/2) d/dz
}

namespace {
// directional derivative along a frame field by central differences on the
// exact field flow
template <class F>
double dir_fd(const ModelSpace& m, F&& f, const Point& p, int k, double h) {
    const Point pp = k < 0 ? flow_reeb(m, p, h) : flow_horizontal(m, p, k, h);
    const Point pm = k < 0 ? flow_reeb(m, p, -h) : flow_horizontal(m, p, k, -h);
    return (f(pp) - f(pm)) / (2.0 * h);
}

// FD commutator [a, b] f at p
template <class F>
double commutator_fd(const ModelSpace& m, F&& f, const Point& p, int a, int b, double h) {
    auto bf = [&](const Point& q) { return dir_fd(m, f, q, b, h); };
    auto af = [&](const Point& q) { return dir_fd(m, f, q, a, h); };
    return dir_fd(m, bf, p, a, h) - dir_fd(m, af, p, b, h);
}
}  // namespace

TEST_CASE("frame brackets by finite differences: [X,Y] = T with O(h^2) convergence") {
    ModelSpace m(1);
    auto f = [](const Point& q) {
        return std::sin(q.xy[0]) * std::cos(0.7 * q.xy[1]) * std::exp(0.3 * q.z);
    };
    const Point p = pt(0.37, -0.54, 0.21);
    auto tf = [&](const Point& q) {
        return 0.3 * std::sin(q.xy[0]) * std::cos(0.7 * q.xy[1]) * std::exp(0.3 * q.z);
    };
    const double exact = tf(p);

    std::vector<double> errs;
    for (double h : {4e-2, 2e-2, 1e-2, 5e-3}) {
        errs.push_back(std::abs(commutator_fd(m, f, p, 0, 1, h) - exact));
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        const double order = std::log2(errs[i] / errs[i + 1]);
        CHECK(order >= 1.9);
    }
}

TEST_CASE("cross brackets vanish for n = 2") {
    ModelSpace m(2);
    auto f = [](const Point& q) {
        return std::sin(q.xy[0] + 0.5 * q.xy[3]) * std::cos(q.xy[1] - q.xy[2]) +
               0.2 * q.z * q.xy[0];
    };
    Point p = Point::origin(m);
    p.xy = {0.3, -0.2, 0.5, 0.1};
    p.z = -0.4;
    const double h = 1e-2;
    // [X_1, X_2], [X_1, Y_2], [Y_1, Y_2] all vanish; [X_2, Y_2] = T
    CHECK(std::abs(commutator_fd(m, f, p, 0, 1, h)) <= 1e-4);
    CHECK(std::abs(commutator_fd(m, f, p, 0, 3, h)) <= 1e-4);
    CHECK(std::abs(commutator_fd(m, f, p, 2, 3, h)) <= 1e-4);
    auto tf = [&](const Point& q) {
        const double e = 1e-5;
        return (f(flow_reeb(m, q, e)) - f(flow_reeb(m, q, -e))) / (2.0 * e);
    };
    CHECK(std::abs(commutator_fd(m, f, p, 1, 3, h) - tf(p)) <= 1e-3);
}

TEST_CASE("ball volume: dilation homogeneity, reproducibility, small-r limit") {
    ModelSpace m(1);
    auto v1 = ball_volume(m, 1.0, 300000, 1001);
    auto v2 = ball_volume(m, 2.0, 300000, 1002);
    const double ratio = v2.value / v1.value;
    const double sigma =
        ratio * std::sqrt(std::pow(v1.std_error / v1.value, 2) + std::pow(v2.std_error / v2.value, 2));
    CHECK(std::abs(ratio - 16.0) <= 3.0 * sigma);  // 2^Q with Q = 4

    // reproducible across seeds within 3 sigma
    auto a = ball_volume(m, 1.0, 200000, 1);
    auto b = ball_volume(m, 1.0, 200000, 2);
    CHECK(std::abs(a.value - b.value) <=
          3.0 * std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error));

    // estimate scales to zero with r (homogeneity of the estimator itself)
    auto small = ball_volume(m, 1e-3, 50000, 3);
    CHECK(small.value <= 1e-10);
    CHECK(small.value >= 0.0);

    CHECK_THROWS_AS(ball_volume(m, 1.0, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(ball_volume(m, -1.0, 100000, 1), std::invalid_argument);
}

TEST_CASE("model space rejects n < 1") {
    CHECK_THROWS_AS(ModelSpace(0), std::invalid_argument);
    CHECK(ModelSpace(3).homogeneous_dim() == 8);
}
