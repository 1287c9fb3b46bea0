#include "sasaki/diffops.hpp"

#include <cmath>
#include <limits>

#include "sasaki/polynomial.hpp"

namespace sasaki {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double coord_scale(const Point& p) {
    double s = 1.0;
    for (double c : p.xy) s = std::max(s, std::abs(c));
    return std::max(s, std::abs(p.z));
}

void check_step(double h, const Point& p, const char* who) {
    if (!(h > 0.0) || h <= 100.0 * kEps * coord_scale(p))
        throw std::invalid_argument(std::string(who) + ": FD step underflow");
}

using Fn = std::function<double(const Point&)>;

// Central difference along frame field k (0..2n-1 horizontal, -1 Reeb),
// using the exact field flows.
double fd_dir(const ModelSpace& m, const Fn& f, const Point& p, int k, double h) {
    Point pp = (k < 0) ? flow_reeb(m, p, h) : flow_horizontal(m, p, k, h);
    Point pm = (k < 0) ? flow_reeb(m, p, -h) : flow_horizontal(m, p, k, -h);
    return (f(pp) - f(pm)) / (2.0 * h);
}

double fd_second(const ModelSpace& m, const Fn& f, const Point& p, int k, double h) {
    Point pp = (k < 0) ? flow_reeb(m, p, h) : flow_horizontal(m, p, k, h);
    Point pm = (k < 0) ? flow_reeb(m, p, -h) : flow_horizontal(m, p, k, -h);
    return (f(pp) - 2.0 * f(p) + f(pm)) / (h * h);
}

double fd_sublaplacian(const ModelSpace& m, const Fn& f, const Point& p, double h) {
    double s = 0.0;
    for (int k = 0; k < 2 * m.n; ++k) s += fd_second(m, f, p, k, h);
    return s;
}

double fd_gradnorm2(const ModelSpace& m, const Fn& f, const Point& p, double h) {
    double s = 0.0;
    for (int k = 0; k < 2 * m.n; ++k) {
        double g = fd_dir(m, f, p, k, h);
        s += g * g;
    }
    return s;
}

// Evaluate v(h) and v(h/2) of an O(h^2) scheme; report v(h/2) with the
// Richardson error estimate |v(h) - v(h/2)| / 3.
template <class G>
OperatorResult fd_with_estimate(G&& eval, double h) {
    double vh = eval(h);
    double vh2 = eval(0.5 * h);
    OperatorResult r;
    r.value = vh2;
    r.scheme = Scheme::FiniteDifference;
    r.est_error = std::abs(vh - vh2) / 3.0;
    return r;
}

struct PolyPack {
    Polynomial f;
    std::vector<Polynomial> grad;  // X_1 f .. X_n f, Y_1 f .. Y_n f
    Polynomial lap;
    Polynomial reeb;
};

PolyPack pack_of(const ModelSpace& m, const Polynomial& f) {
    PolyPack pk{f, {}, Polynomial(f.nvars()), Polynomial(f.nvars())};
    pk.grad.reserve(2 * m.n);
    for (int i = 0; i < m.n; ++i) pk.grad.push_back(apply_x(m, i, f));
    for (int i = 0; i < m.n; ++i) pk.grad.push_back(apply_y(m, i, f));
    for (int k = 0; k < 2 * m.n; ++k) {
        Polynomial second = (k < m.n) ? apply_x(m, k, pk.grad[k]) : apply_y(m, k - m.n, pk.grad[k]);
        pk.lap = pk.lap + second;
    }
    pk.reeb = apply_reeb(m, f);
    return pk;
}

Polynomial grad_inner(const ModelSpace&, const std::vector<Polynomial>& ga,
                      const std::vector<Polynomial>& gb) {
    Polynomial s(ga.front().nvars());
    for (std::size_t k = 0; k < ga.size(); ++k) s = s + ga[k] * gb[k];
    return s;
}

std::vector<Polynomial> grad_of(const ModelSpace& m, const Polynomial& f) {
    std::vector<Polynomial> g;
    g.reserve(2 * m.n);
    for (int i = 0; i < m.n; ++i) g.push_back(apply_x(m, i, f));
    for (int i = 0; i < m.n; ++i) g.push_back(apply_y(m, i, f));
    return g;
}

}  // namespace

GradientResult horizontal_gradient(const ModelSpace& m, const ScalarField& f, const Point& p) {
    GradientResult r;
    r.values.resize(2 * m.n);
    if (f.is_polynomial()) {
        auto coords = coords_of(p);
        const auto& poly = f.poly();
        for (int i = 0; i < m.n; ++i) {
            r.values[i] = apply_x(m, i, poly).evaluate(coords);
            r.values[m.n + i] = apply_y(m, i, poly).evaluate(coords);
        }
        return r;
    }
    const double h0 = f.fd_step() * coord_scale(p);
    check_step(h0, p, "horizontal_gradient");
    Fn fn = [&f](const Point& q) { return f(q); };
    r.scheme = Scheme::FiniteDifference;
    double worst = 0.0;
    for (int k = 0; k < 2 * m.n; ++k) {
        double vh = fd_dir(m, fn, p, k, h0);
        double vh2 = fd_dir(m, fn, p, k, 0.5 * h0);
        r.values[k] = vh2;
        worst = std::max(worst, std::abs(vh - vh2) / 3.0);
    }
    r.est_error = worst;
    return r;
}

OperatorResult sublaplacian(const ModelSpace& m, const ScalarField& f, const Point& p) {
    if (f.is_polynomial()) {
        return {apply_sublaplacian(m, f.poly()).evaluate(coords_of(p)), Scheme::Exact, 0.0};
    }
    const double h0 = f.fd_step() * coord_scale(p);
    check_step(h0, p, "sublaplacian");
    Fn fn = [&f](const Point& q) { return f(q); };
    return fd_with_estimate([&](double h) { return fd_sublaplacian(m, fn, p, h); }, h0);
}

OperatorResult reeb_derivative(const ModelSpace& m, const ScalarField& f, const Point& p) {
    if (f.is_polynomial()) {
        return {apply_reeb(m, f.poly()).evaluate(coords_of(p)), Scheme::Exact, 0.0};
    }
    const double h0 = f.fd_step() * coord_scale(p);
    check_step(h0, p, "reeb_derivative");
    Fn fn = [&f](const Point& q) { return f(q); };
    return fd_with_estimate([&](double h) { return fd_dir(m, fn, p, -1, h); }, h0);
}

OperatorResult gamma2(const ModelSpace& m, const ScalarField& f, const Point& p) {
    if (f.is_polynomial()) {
        PolyPack pk = pack_of(m, f.poly());
        Polynomial gn2 = grad_inner(m, pk.grad, pk.grad);
        Polynomial lap_gn2 = apply_sublaplacian(m, gn2);
        Polynomial cross = grad_inner(m, pk.grad, grad_of(m, pk.lap));
        Polynomial g2 = (lap_gn2 - cross * 2.0) * 0.5;
        return {g2.evaluate(coords_of(p)), Scheme::Exact, 0.0};
    }
    // nested FD: inner derivatives at h, outer operators at 8h
    const double h0 = std::max(f.fd_step(), 3e-5) * coord_scale(p);
    check_step(h0, p, "gamma2");
    Fn fn = [&f](const Point& q) { return f(q); };
    auto eval = [&](double h) {
        const double H = 8.0 * h;
        Fn gn2 = [&, h](const Point& q) { return fd_gradnorm2(m, fn, q, h); };
        Fn lap = [&, h](const Point& q) { return fd_sublaplacian(m, fn, q, h); };
        double lap_gn2 = fd_sublaplacian(m, gn2, p, H);
        double cross = 0.0;
        for (int k = 0; k < 2 * m.n; ++k)
            cross += fd_dir(m, fn, p, k, h) * fd_dir(m, lap, p, k, H);
        return 0.5 * (lap_gn2 - 2.0 * cross);
    };
    return fd_with_estimate(eval, h0);
}

OperatorResult gamma2_T(const ModelSpace& m, const ScalarField& f, const Point& p) {
    if (f.is_polynomial()) {
        PolyPack pk = pack_of(m, f.poly());
        Polynomial tf2 = pk.reeb * pk.reeb;
        Polynomial g2t = (apply_sublaplacian(m, tf2) - pk.reeb * apply_reeb(m, pk.lap) * 2.0) * 0.5;
        return {g2t.evaluate(coords_of(p)), Scheme::Exact, 0.0};
    }
    const double h0 = std::max(f.fd_step(), 3e-5) * coord_scale(p);
    check_step(h0, p, "gamma2_T");
    Fn fn = [&f](const Point& q) { return f(q); };
    auto eval = [&](double h) {
        const double H = 8.0 * h;
        Fn tf2 = [&, h](const Point& q) {
            double tf = fd_dir(m, fn, q, -1, h);
            return tf * tf;
        };
        Fn lap = [&, h](const Point& q) { return fd_sublaplacian(m, fn, q, h); };
        double lap_tf2 = fd_sublaplacian(m, tf2, p, H);
        double tf = fd_dir(m, fn, p, -1, h);
        double t_lap = fd_dir(m, lap, p, -1, H);
        return 0.5 * (lap_tf2 - 2.0 * tf * t_lap);
    };
    return fd_with_estimate(eval, h0);
}

OperatorResult killing_identity_residual(const ModelSpace& m, const ScalarField& f, const Point& p) {
    if (f.is_polynomial()) {
        PolyPack pk = pack_of(m, f.poly());
        Polynomial tf2 = pk.reeb * pk.reeb;
        Polynomial lhs = grad_inner(m, pk.grad, grad_of(m, tf2));
        Polynomial gn2 = grad_inner(m, pk.grad, pk.grad);
        Polynomial rhs = pk.reeb * apply_reeb(m, gn2);
        return {(lhs - rhs).evaluate(coords_of(p)), Scheme::Exact, 0.0};
    }
    const double h0 = std::max(f.fd_step(), 3e-5) * coord_scale(p);
    check_step(h0, p, "killing_identity_residual");
    Fn fn = [&f](const Point& q) { return f(q); };
    auto eval = [&](double h) {
        const double H = 8.0 * h;
        Fn tf2 = [&, h](const Point& q) {
            double tf = fd_dir(m, fn, q, -1, h);
            return tf * tf;
        };
        Fn gn2 = [&, h](const Point& q) { return fd_gradnorm2(m, fn, q, h); };
        double lhs = 0.0;
        for (int k = 0; k < 2 * m.n; ++k)
            lhs += fd_dir(m, fn, p, k, h) * fd_dir(m, tf2, p, k, H);
        double rhs = fd_dir(m, fn, p, -1, h) * fd_dir(m, gn2, p, -1, H);
        return lhs - rhs;
    };
    return fd_with_estimate(eval, h0);
}

OperatorResult cd_residual(const ModelSpace& m, const ScalarField& f, const Point& p, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("cd_residual: nu must be > 0");
    if (f.is_polynomial()) {
        PolyPack pk = pack_of(m, f.poly());
        Polynomial gn2 = grad_inner(m, pk.grad, pk.grad);
        Polynomial lap_gn2 = apply_sublaplacian(m, gn2);
        Polynomial cross = grad_inner(m, pk.grad, grad_of(m, pk.lap));
        Polynomial g2 = (lap_gn2 - cross * 2.0) * 0.5;
        Polynomial tf2 = pk.reeb * pk.reeb;
        Polynomial g2t = (apply_sublaplacian(m, tf2) - pk.reeb * apply_reeb(m, pk.lap) * 2.0) * 0.5;
        Polynomial rhs = pk.lap * pk.lap * (1.0 / (2.0 * m.n)) - gn2 * (1.0 / nu) +
                         tf2 * (0.5 * m.n);
        Polynomial res = g2 + g2t * nu - rhs;
        return {res.evaluate(coords_of(p)), Scheme::Exact, 0.0};
    }
    OperatorResult g2 = gamma2(m, f, p);
    OperatorResult g2t = gamma2_T(m, f, p);
    OperatorResult lap = sublaplacian(m, f, p);
    GradientResult grad = horizontal_gradient(m, f, p);
    OperatorResult tf = reeb_derivative(m, f, p);
    double rhs = lap.value * lap.value / (2.0 * m.n) - grad.norm_squared() / nu +
                 0.5 * m.n * tf.value * tf.value;
    OperatorResult r;
    r.value = g2.value + nu * g2t.value - rhs;
    r.scheme = Scheme::FiniteDifference;
    r.est_error = g2.est_error + nu * g2t.est_error +
                  std::abs(lap.value) * lap.est_error / m.n +
                  2.0 * std::sqrt(grad.norm_squared()) * grad.est_error / nu +
                  m.n * std::abs(tf.value) * tf.est_error;
    return r;
}

}  // namespace sasaki
