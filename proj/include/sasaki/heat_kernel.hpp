#pragma once

// Heat kernel of d/dt = D (sub-Laplacian) on H^3 (n = 1), via the classical
// one-dimensional integral representation
//
//   p(t, 0, (x,y,z)) = 1/(4 pi^2 t^2) *
//       int_0^inf (s/sinh s) exp(-(s coth s) rho^2 / (4t)) cos(s z / t) ds,
//
// rho^2 = x^2 + y^2, reduced by left-invariance for general base points.
// The constants of the representation are pinned by the validation gate
// (normalization, heat-equation residual, Monte Carlo agreement), not taken
// on trust. Log-derivatives come from differentiating under the integral.

#include <array>
#include <cstdint>

#include "sasaki/core.hpp"
#include "sasaki/quadrature.hpp"

namespace sasaki {

struct HeatKernelBundle {
    double t = 0.0;
    Point x, y;
    double p = 0.0;                       // kernel value, > 0
    double dt_log = 0.0;                  // d/dt ln p  ( = Dp/p by the heat equation)
    std::array<double, 2> grad_log{};     // (X ln p, Y ln p) at y
    double reeb_log = 0.0;                // T ln p at y
    double quad_error = 0.0;              // max propagated relative error of the logs

    struct FieldErrors {
        double p_rel = 0.0;
        double dt_log = 0.0;
        double grad_log = 0.0;
        double reeb_log = 0.0;
    } err;
};

HeatKernelBundle heat_kernel(const ModelSpace& m, double t, const Point& x, const Point& y,
                             const QuadOptions& opt = {});

// |dp/dt - Dp| / p with the analytic time derivative and a finite-difference
// sub-Laplacian in y (frame-flow second differences with step fd_step;
// fd_step = 0 picks 2e-3 * min(1, sqrt(t))).
double heat_equation_residual(const ModelSpace& m, double t, const Point& y, double fd_step = 0.0,
                              const QuadOptions& opt = {});

// Independent Monte Carlo oracle: horizontal diffusion with generator D
// (sqrt(2) scaling on the Brownian increments), fixed-step Euler with
// step t/2048, per-path counter-based seeding.
struct BoxRegion {
    std::array<double, 3> lo{}, hi{};
    double volume() const {
        return (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
    }
    bool contains(double x, double y, double z) const {
        return x >= lo[0] && x <= hi[0] && y >= lo[1] && y <= hi[1] && z >= lo[2] && z <= hi[2];
    }
};

struct DiffusionEstimate {
    double density = 0.0;    // endpoint fraction in cell / cell volume
    double std_error = 0.0;  // binomial standard error of the density
    long long paths = 0;
    std::uint64_t seed = 0;
};

DiffusionEstimate mc_estimate(const ModelSpace& m, double t, const BoxRegion& cell, long long paths,
                              std::uint64_t seed, int steps = 2048);
DiffusionEstimate mc_estimate_serial(const ModelSpace& m, double t, const BoxRegion& cell,
                                     long long paths, std::uint64_t seed, int steps = 2048);

// mu(B(x, sqrt t)) = c1 * t^{Q/2} by left-invariance and dilation homogeneity;
// c1 is estimated once (deterministic seed) and cached.
double ball_volume_c1(const ModelSpace& m);
double ball_volume_at_scale(const ModelSpace& m, const Point& x, double t);

// Normalization check: integral of p(t,0,.) over a truncated region, by
// tensor quadrature in (rho, z) using rotational symmetry.
double normalization_integral(const ModelSpace& m, double t, const QuadOptions& opt = {});

}  // namespace sasaki
