#pragma once

// Heisenberg model space H^{2n+1}: exponential coordinates, left-invariant
// frame, group law, anisotropic dilations.
//
// Conventions (fixed; everything downstream is stated relative to them):
//   coordinates (x_1..x_n, y_1..y_n, z)
//   frame       X_i = d/dx_i - (y_i/2) d/dz,  Y_i = d/dy_i + (x_i/2) d/dz,
//               T = d/dz
//   group law   (a,c)*(b,c') = (a+b, c+c'+omega(a,b)/2) with
//               omega(a,b) = sum_i (a_x_i b_y_i - a_y_i b_x_i)
//   Haar measure = Lebesgue measure in these coordinates.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sasaki {

struct ModelSpace {
    int n = 1;  // CR dimension; horizontal rank 2n, real dimension 2n+1

    explicit ModelSpace(int cr_dim = 1) : n(cr_dim) {
        if (n < 1) throw std::invalid_argument("ModelSpace: n must be >= 1");
    }
    int horizontal_rank() const { return 2 * n; }
    int real_dim() const { return 2 * n + 1; }
    int homogeneous_dim() const { return 2 * n + 2; }  // Q
};

// Point in exponential coordinates. xy holds (x_1..x_n, y_1..y_n).
struct Point {
    std::vector<double> xy;
    double z = 0.0;

    Point() : xy(2, 0.0) {}
    Point(double x, double y, double zz) : xy{x, y}, z(zz) {}
    Point(std::vector<double> horizontal, double zz) : xy(std::move(horizontal)), z(zz) {}

    static Point origin(const ModelSpace& m) { return Point(std::vector<double>(2 * m.n, 0.0), 0.0); }
};

// Covector (momentum). pxy holds (px_1..px_n, py_1..py_n).
struct Covector {
    std::vector<double> pxy;
    double pz = 0.0;

    Covector() : pxy(2, 0.0) {}
    Covector(double px, double py, double pzz) : pxy{px, py}, pz(pzz) {}
    Covector(std::vector<double> horizontal, double pzz) : pxy(std::move(horizontal)), pz(pzz) {}

    static Covector zero(const ModelSpace& m) { return Covector(std::vector<double>(2 * m.n, 0.0), 0.0); }
};

// omega(a,b) = sum_i (a_x_i b_y_i - a_y_i b_x_i) on R^{2n}
double symplectic_form(const ModelSpace& m, const std::vector<double>& a, const std::vector<double>& b);

Point multiply(const ModelSpace& m, const Point& p, const Point& q);
Point inverse(const ModelSpace& m, const Point& p);

// delta_lambda: (x, z) -> (lambda x, lambda^2 z). Group automorphism.
Point dilate(const ModelSpace& m, double lambda, const Point& p);

// Coordinate components of the frame fields at p.
struct Frame {
    std::vector<std::vector<double>> horizontal;  // 2n vectors of length 2n+1 (X_1..X_n, Y_1..Y_n)
    std::vector<double> reeb;                     // length 2n+1
};
Frame frame_at(const ModelSpace& m, const Point& p);

// Exact flow of a horizontal frame field: the coefficients of X_i (resp. Y_i)
// are constant along its own integral curves, so time-h flow is a single
// affine step. field_index in [0, 2n): first n are X_i, next n are Y_i.
Point flow_horizontal(const ModelSpace& m, const Point& p, int field_index, double h);
Point flow_reeb(const ModelSpace& m, const Point& p, double h);

// Monte Carlo estimate of mu(B(0,r)), the sub-Riemannian ball volume, by
// rejection sampling over the box [-2r,2r]^{2n} x [-r^2,r^2] (provably
// containing B(0,r)). Deterministic given seed, independent of thread count.
struct BallVolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long samples = 0;
    std::uint64_t seed = 0;
};
BallVolumeEstimate ball_volume(const ModelSpace& m, double r, long long samples, std::uint64_t seed);
// Serial reference implementation; must agree with ball_volume exactly.
BallVolumeEstimate ball_volume_serial(const ModelSpace& m, double r, long long samples, std::uint64_t seed);

}  // namespace sasaki
