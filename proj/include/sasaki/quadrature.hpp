#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature with bisection refinement and an
// embedded error estimate, for scalar and small fixed-size vector integrands.
// The vector form integrates all components over a shared node set so related
// integrals (a kernel and its derivatives) see identical subdivisions.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sasaki {

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_floor = 1e-16;
    int max_intervals = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;     // truncation estimate plus roundoff floor
    double abs_integral = 0.0;  // integral of |f|, for roundoff accounting
    int intervals = 0;
    bool converged = true;
};

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

template <std::size_t K>
struct VecQuadResult {
    std::array<double, K> value{};
    std::array<double, K> error{};
    std::array<double, K> abs_integral{};
    int intervals = 0;
    bool converged = true;
};

namespace detail {
// Kronrod 15-point nodes/weights on [-1,1] (positive half; node 0 included)
// and the embedded Gauss-7 weights.
extern const double kKronrodNodes[8];
extern const double kKronrodWeights[8];
extern const double kGaussWeights[4];
}  // namespace detail

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double partial_value, double partial_error)
        : std::runtime_error(what), partial_value(partial_value), partial_error(partial_error) {}
    double partial_value;
    double partial_error;
};

// Adaptive vector quadrature. Convergence requires every component to meet
// max(abs_floor, rel_tol * |I_k|). Roundoff is accounted as eps * int |f_k|.
template <std::size_t K, class F>
VecQuadResult<K> integrate_vec(F&& f, double a, double b, const QuadOptions& opt = {}) {
    struct Interval {
        double a, b;
        std::array<double, K> value, error, absint;
        double max_err;
    };

    auto eval_interval = [&](double lo, double hi) {
        Interval iv;
        iv.a = lo;
        iv.b = hi;
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        std::array<double, K> kron{}, gauss{}, absint{};
        for (int j = 0; j < 8; ++j) {
            const double xn = detail::kKronrodNodes[j];
            std::array<double, K> fsum{}, fabs{};
            if (j == 0) {
                fsum = f(c);
                for (std::size_t k = 0; k < K; ++k) fabs[k] = std::abs(fsum[k]);
            } else {
                auto fp = f(c + h * xn);
                auto fm = f(c - h * xn);
                for (std::size_t k = 0; k < K; ++k) {
                    fsum[k] = fp[k] + fm[k];
                    fabs[k] = std::abs(fp[k]) + std::abs(fm[k]);
                }
            }
            for (std::size_t k = 0; k < K; ++k) {
                kron[k] += detail::kKronrodWeights[j] * fsum[k];
                absint[k] += detail::kKronrodWeights[j] * fabs[k];
            }
            if (j % 2 == 0) {  // even Kronrod indices carry the Gauss-7 nodes
                for (std::size_t k = 0; k < K; ++k) gauss[k] += detail::kGaussWeights[j / 2] * fsum[k];
            }
        }
        iv.max_err = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            iv.value[k] = kron[k] * h;
            iv.absint[k] = absint[k] * h;
            double diff = std::abs(kron[k] - gauss[k]) * h;
            // standard Kronrod error sharpening
            double scale = iv.absint[k];
            double err = (scale > 0.0 && diff > 0.0)
                             ? scale * std::min(1.0, std::pow(200.0 * diff / scale, 1.5))
                             : diff;
            iv.error[k] = std::max(err, diff * 1e-3);
            iv.max_err = std::max(iv.max_err, iv.error[k]);
        }
        return iv;
    };

    std::vector<Interval> ivs;
    ivs.push_back(eval_interval(a, b));

    // truncation estimate and roundoff floor tracked separately: the floor is
    // unbeatable, so convergence compares truncation against the larger of
    // the requested tolerance and the floor itself
    auto totals = [&](std::array<double, K>& trunc, std::array<double, K>& floor_) {
        VecQuadResult<K> r;
        trunc.fill(0.0);
        floor_.fill(0.0);
        for (const auto& iv : ivs) {
            for (std::size_t k = 0; k < K; ++k) {
                r.value[k] += iv.value[k];
                trunc[k] += iv.error[k];
                r.abs_integral[k] += iv.absint[k];
            }
        }
        for (std::size_t k = 0; k < K; ++k) {
            floor_[k] = 2.2e-16 * r.abs_integral[k];
            r.error[k] = trunc[k] + floor_[k];
        }
        r.intervals = static_cast<int>(ivs.size());
        return r;
    };

    std::array<double, K> trunc{}, floor_{};
    while (static_cast<int>(ivs.size()) < opt.max_intervals) {
        VecQuadResult<K> tot = totals(trunc, floor_);
        bool ok = true;
        for (std::size_t k = 0; k < K; ++k) {
            double target = std::max({opt.abs_floor, opt.rel_tol * std::abs(tot.value[k]),
                                      2.0 * floor_[k]});
            if (trunc[k] > target) ok = false;
        }
        if (ok) {
            tot.converged = true;
            return tot;
        }
        // split the interval with the largest error
        std::size_t worst = 0;
        for (std::size_t i = 1; i < ivs.size(); ++i)
            if (ivs[i].max_err > ivs[worst].max_err) worst = i;
        Interval w = ivs[worst];
        double mid = 0.5 * (w.a + w.b);
        if (!(mid > w.a && mid < w.b)) break;  // interval exhausted at double precision
        ivs[worst] = eval_interval(w.a, mid);
        ivs.push_back(eval_interval(mid, w.b));
    }

    VecQuadResult<K> tot = totals(trunc, floor_);
    tot.converged = false;
    return tot;
}

}  // namespace sasaki
