#include "sasaki/core.hpp"

#include <cmath>

#include "sasaki/geodesics.hpp"
#include "sasaki/parallel.hpp"
#include "sasaki/rng.hpp"

namespace sasaki {

namespace {
void check_dim(const ModelSpace& m, const Point& p, const char* who) {
    if (static_cast<int>(p.xy.size()) != 2 * m.n)
        throw std::invalid_argument(std::string(who) + ": point has wrong horizontal dimension");
}
}  // namespace

double symplectic_form(const ModelSpace& m, const std::vector<double>& a, const std::vector<double>& b) {
    double w = 0.0;
    for (int i = 0; i < m.n; ++i) w += a[i] * b[m.n + i] - a[m.n + i] * b[i];
    return w;
}

Point multiply(const ModelSpace& m, const Point& p, const Point& q) {
    check_dim(m, p, "multiply");
    check_dim(m, q, "multiply");
    Point r;
    r.xy.resize(2 * m.n);
    for (int k = 0; k < 2 * m.n; ++k) r.xy[k] = p.xy[k] + q.xy[k];
    r.z = p.z + q.z + 0.5 * symplectic_form(m, p.xy, q.xy);
    return r;
}

Point inverse(const ModelSpace& m, const Point& p) {
    check_dim(m, p, "inverse");
    Point r = p;
    for (auto& c : r.xy) c = -c;
    r.z = -p.z;
    return r;
}

Point dilate(const ModelSpace& m, double lambda, const Point& p) {
    check_dim(m, p, "dilate");
    if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be > 0");
    Point r = p;
    for (auto& c : r.xy) c *= lambda;
    r.z = p.z * lambda * lambda;
    return r;
}

Frame frame_at(const ModelSpace& m, const Point& p) {
    check_dim(m, p, "frame_at");
    const int dim = m.real_dim();
    Frame fr;
    fr.horizontal.assign(2 * m.n, std::vector<double>(dim, 0.0));
    for (int i = 0; i < m.n; ++i) {
        fr.horizontal[i][i] = 1.0;                       // X_i: d/dx_i
        fr.horizontal[i][dim - 1] = -0.5 * p.xy[m.n + i];  //      -(y_i/2) d/dz
        fr.horizontal[m.n + i][m.n + i] = 1.0;           // Y_i: d/dy_i
        fr.horizontal[m.n + i][dim - 1] = 0.5 * p.xy[i];   //      +(x_i/2) d/dz
    }
    fr.reeb.assign(dim, 0.0);
    fr.reeb[dim - 1] = 1.0;
    return fr;
}

Point flow_horizontal(const ModelSpace& m, const Point& p, int field_index, double h) {
    check_dim(m, p, "flow_horizontal");
    if (field_index < 0 || field_index >= 2 * m.n)
        throw std::invalid_argument("flow_horizontal: field index out of range");
    Point r = p;
    if (field_index < m.n) {  // X_i
        const int i = field_index;
        r.xy[i] += h;
        r.z -= 0.5 * p.xy[m.n + i] * h;
    } else {  // Y_i
        const int i = field_index - m.n;
        r.xy[m.n + i] += h;
        r.z += 0.5 * p.xy[i] * h;
    }
    return r;
}

Point flow_reeb(const ModelSpace& m, const Point& p, double h) {
    check_dim(m, p, "flow_reeb");
    Point r = p;
    r.z += h;
    return r;
}

namespace {
// per-sample hit test against B(0, r), counter-based stream
bool ball_sample_hit(const ModelSpace& m, double r, std::uint64_t seed, long long index) {
    Xoshiro256ss rng(derive_seed(seed, static_cast<std::uint64_t>(index)));
    const int hdim = 2 * m.n;
    double rho2 = 0.0;
    for (int k = 0; k < hdim; ++k) {
        double c = rng.uniform(-2.0 * r, 2.0 * r);
        rho2 += c * c;
    }
    double z = rng.uniform(-r * r, r * r);
    double rho = std::sqrt(rho2);
    if (rho > r) return false;  // d >= rho always
    return reduced_sr_distance(rho, z) <= r;
}

BallVolumeEstimate ball_volume_impl(const ModelSpace& m, double r, long long samples,
                                    std::uint64_t seed, bool parallel) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_volume: r must be > 0");
    if (samples < 10000) throw std::invalid_argument("ball_volume: need at least 1e4 samples");

    const double box_vol =
        std::pow(4.0 * r, 2.0 * m.n) * (2.0 * r * r);
    const long long block = 8192;
    const long long nblocks = (samples + block - 1) / block;
    std::vector<long long> hits(static_cast<std::size_t>(nblocks), 0);

    for_each_block(
        samples, block,
        [&](long long b, long long lo, long long hi) {
            long long h = 0;
            for (long long i = lo; i < hi; ++i)
                if (ball_sample_hit(m, r, seed, i)) ++h;
            hits[static_cast<std::size_t>(b)] = h;
        },
        parallel);

    long long total_hits = 0;
    for (long long h : hits) total_hits += h;

    const double frac = static_cast<double>(total_hits) / static_cast<double>(samples);
    BallVolumeEstimate est;
    est.value = frac * box_vol;
    est.std_error = box_vol * std::sqrt(std::max(frac * (1.0 - frac), 1e-300) /
                                        static_cast<double>(samples));
    est.samples = samples;
    est.seed = seed;
    return est;
}
}  // namespace

BallVolumeEstimate ball_volume(const ModelSpace& m, double r, long long samples, std::uint64_t seed) {
    return ball_volume_impl(m, r, samples, seed, true);
}

BallVolumeEstimate ball_volume_serial(const ModelSpace& m, double r, long long samples,
                                      std::uint64_t seed) {
    return ball_volume_impl(m, r, samples, seed, false);
}

}  // namespace sasaki
