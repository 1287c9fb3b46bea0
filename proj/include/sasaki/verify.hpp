#pragma once

// Inequality checkers and constant fitters:
//   - curvature-dimension residual (exact polynomial path)
//   - Li-Yau estimate and its tau-scaled form for the heat kernel
//   - Harnack comparison of p at two space-time points
//   - Gaussian two-sided bound with fitted constants C(eps)
//   - global comparison d <= A d_tau + B sqrt(tau) sqrt(d_tau), fitted (A,B)
//   - two-regime scaling analysis of d vs d_tau under dilations

#include <cstdint>
#include <vector>

#include "sasaki/core.hpp"
#include "sasaki/diffops.hpp"
#include "sasaki/geodesics.hpp"
#include "sasaki/heat_kernel.hpp"
#include "sasaki/report.hpp"
#include "sasaki/scalar_field.hpp"

namespace sasaki {

// Coefficients of the scaled Li-Yau form  g_tau-norm^2 <= a(u) Dp/p + b(u):
//   a(u) = (1 + 3 tau^2/(n u)) (1 + 3/n)
//   b(u) = (n (1+3/n)^2 / u) (1 + 3 tau^2/(n u))
// so that b/a = n (1+3/n)/u and int_s^t b/a du = (n+3) ln(t/s).
struct HarnackParams {
    int n = 1;
    double tau = 0.0;
    double s = 0.0, t = 0.0;

    HarnackParams(int n_, double tau_, double s_, double t_) : n(n_), tau(tau_), s(s_), t(t_) {
        if (n < 1 || tau < 0.0 || !(0.0 < s && s < t))
            throw std::invalid_argument("HarnackParams: need n>=1, tau>=0, 0<s<t");
    }
    double a(double u) const { return (1.0 + 3.0 * tau * tau / (n * u)) * (1.0 + 3.0 / n); }
    double b(double u) const {
        double c = 1.0 + 3.0 / n;
        return (n * c * c / u) * (1.0 + 3.0 * tau * tau / (n * u));
    }
    // closed form of int_s^t b/a du
    double log_time_factor() const { return (n + 3.0) * std::log(t / s); }
};

InequalityReport check_cd(const ModelSpace& m, const ScalarField& f, const Point& p, double nu);

InequalityReport check_liyau(const ModelSpace& m, double t, const Point& y, const QuadOptions& opt = {});
InequalityReport check_scaled_liyau(const ModelSpace& m, double t, const Point& y, double tau,
                                    const QuadOptions& opt = {});

InequalityReport check_harnack(const ModelSpace& m, double s, double t, const Point& x, const Point& y,
                               const Point& z, double tau, const ShootOptions& shoot = {},
                               const QuadOptions& opt = {});

// Gaussian sandwich: smallest C >= 1 with
//   C^{-1} V(t)^{-1} exp(-(1+3/n) d^2/((4-eps) t)) <= p <= C V(t)^{-1} exp(-d^2/((4+eps) t))
// over the supplied (t, y) grid, V(t) = mu(B(0, sqrt t)).
struct GaussianGridPoint {
    double t;
    Point y;
};
FitResult fit_gaussian_constants(const ModelSpace& m, const std::vector<GaussianGridPoint>& grid,
                                 double eps, const QuadOptions& opt = {});
// Default grid: t in logspace[0.1, 10], 50 targets per t (parabolically scaled
// so every point stays inside the double-precision window of the kernel).
std::vector<GaussianGridPoint> default_gaussian_grid(const ModelSpace& m, std::uint64_t seed);

InequalityReport check_global_distance(const ModelSpace& m, const Point& x, const Point& y, double tau,
                                       double A, double B, const ShootOptions& opts = {});

// Minimal (A, B), least-max sense (minimize max(A,B), tie-break min A+B),
// subject to d_i <= A u_i + B v_i over the sample, A >= 1, B >= 0; solved
// exactly by vertex enumeration over constraint pairs.
struct DistanceSample {
    double d;      // sub-Riemannian distance
    double d_tau;  // scaled Riemannian distance
    double tau;
    double solver_err;  // propagated distance accuracy for tolerance bookkeeping
};
FitResult fit_distance_constants(const std::vector<DistanceSample>& samples);

// Collect samples for the fit: each pair is solved at every tau in tau_grid.
std::vector<DistanceSample> collect_distance_samples(const ModelSpace& m,
                                                     const std::vector<PointPair>& pairs,
                                                     const std::vector<double>& tau_grid,
                                                     const ShootOptions& opts = {});

// Mixed training sample: random pairs in the box plus the deterministic
// extremal families (vertical pairs, horizontal pairs, dilated verticals).
std::vector<PointPair> default_distance_pairs(const ModelSpace& m, int random_count, std::uint64_t seed);
std::vector<PointPair> random_distance_pairs(const ModelSpace& m, int count, std::uint64_t seed,
                                             double box_xy = 3.0, double box_z = 3.0);

// log d vs log d_tau slopes for a dilated pair, fitted per decade.
struct RegimeRow {
    double lambda, d, d_tau;
};
struct RegimeReport {
    double small_scale_slope = 0.0;  // expected 1/2 for vertical pairs
    double large_scale_slope = 0.0;  // expected 1
    std::vector<RegimeRow> rows;
    bool all_converged = false;
};
RegimeReport regime_analysis(const ModelSpace& m, const Point& a, const Point& b, double tau,
                             const std::vector<double>& lambdas, const ShootOptions& opts = {});

}  // namespace sasaki
