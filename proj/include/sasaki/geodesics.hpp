#pragma once

// Sub-Riemannian distance d and the scaled Riemannian distances d_tau on the
// model space, via Hamiltonian geodesic shooting.
//
// Cometric: H_SR(p, pv) = (1/2) sum_i [ <pv, X_i(p)>^2 + <pv, Y_i(p)>^2 ],
// and for the tau-metric (g_tau(T,T) = 1/tau^2) an extra (tau^2/2) <pv, T>^2.
// Unit-time parametrization: length = sqrt(2 H).
//
// The classical H^1 closed form (reduced to rho = |horizontal displacement|
// and the vertical displacement) is kept as an independent oracle.

#include <cstdint>
#include <optional>
#include <vector>

#include "sasaki/core.hpp"
#include "sasaki/report.hpp"

namespace sasaki {

struct MetricSpec {
    // tau == 0 encodes the sub-Riemannian metric; tau > 0 the scaled
    // Riemannian metric g_tau.
    double tau = 0.0;

    static MetricSpec sub_riemannian() { return MetricSpec{0.0}; }
    static MetricSpec riemannian(double tau) {
        if (!(tau > 0.0)) throw std::invalid_argument("MetricSpec: tau must be > 0");
        return MetricSpec{tau};
    }
    bool is_riemannian() const { return tau > 0.0; }
};

double hamiltonian(const ModelSpace& m, const MetricSpec& spec, const Point& p, const Covector& pv);

struct PathState {
    Point q;
    Covector pv;
};

// Fixed-step RK4 integration of Hamilton's equations over [0, time].
// Returns steps+1 states including the initial one. Aborts on non-finite state.
std::vector<PathState> integrate(const ModelSpace& m, const MetricSpec& spec, const Point& p0,
                                 const Covector& pv0, double time, int steps);

// Endpoint only (no path storage); the shooting hot path.
PathState integrate_endpoint(const ModelSpace& m, const MetricSpec& spec, const Point& p0,
                             const Covector& pv0, double time, int steps);

struct ShootOptions {
    int steps = 512;          // RK4 steps during the search
    int refine_steps = 2048;  // RK4 steps for the final refinement
    int starts = 32;          // multi-start count over the pz grid
    // Convergence in the dilation-consistent relative gauge: with S the
    // homogeneous norm of the target (floored at 1), require
    // |dxy| <= tol * S and |dz| <= tol * S^2.
    double tol = 1e-7;
    int max_newton_iters = 60;
    int max_restarts = 8;     // seeded random restarts if no start converges
    std::uint64_t seed = 12345;
};

struct GeodesicResult {
    double length = 0.0;
    Covector initial_covector;
    double endpoint_error = 0.0;  // relative gauge (see ShootOptions::tol)
    int restarts_used = 0;
    bool converged = false;
};

// Boundary-value solve for the distance. Multi-start shooting, damped
// Gauss-Newton refinement, minimum over converged branches with a
// deterministic tie-break on the covector. Never silently wrong: if nothing
// converges the result carries converged = false.
GeodesicResult distance(const ModelSpace& m, const MetricSpec& spec, const Point& a, const Point& b,
                        const ShootOptions& opts = {});

// Batch distances over pairs, one solve per entry. Parallel version maps
// blocks of indices onto threads; results are independent of thread count.
struct PointPair {
    Point a, b;
};
std::vector<GeodesicResult> distance_batch(const ModelSpace& m, const MetricSpec& spec,
                                           const std::vector<PointPair>& pairs,
                                           const ShootOptions& opts = {});
std::vector<GeodesicResult> distance_batch_serial(const ModelSpace& m, const MetricSpec& spec,
                                                  const std::vector<PointPair>& pairs,
                                                  const ShootOptions& opts = {});

// Classical H^1 closed form (n = 1 only). Reduces to d(0, a^{-1} b) and solves
// the enclosed-area/chord relation mu(theta) = (2 theta - sin 2 theta) /
// (2 sin^2 theta) = 4|z| / rho^2 by a bracketed root find to 1e-12.
double closed_form_distance(const ModelSpace& m, const Point& a, const Point& b);

// Reduced radial form, valid for all n with rho = |horizontal displacement|:
// the H^{2n+1} distance from the origin depends only on (rho, |z|).
double reduced_sr_distance(double rho, double z);

// Checks d(dl a, dl b) = l d(a,b) and d_tau(dl a, dl b) = l d_{tau/l}(a,b)
// (dl = dilation by l). Reports |lhs - rhs| against a solver-derived tolerance.
std::pair<InequalityReport, InequalityReport> dilation_identity_check(
    const ModelSpace& m, const Point& a, const Point& b, double lambda, double tau,
    const ShootOptions& opts = {});

}  // namespace sasaki
