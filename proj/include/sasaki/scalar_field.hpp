#pragma once

// ScalarField: either an exact polynomial or a black-box callable with an
// attached finite-difference step. Operators pick the evaluation path from
// the representation.

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

#include "sasaki/core.hpp"
#include "sasaki/polynomial.hpp"

namespace sasaki {

class ScalarField {
  public:
    using Fn = std::function<double(const Point&)>;

    static ScalarField polynomial(Polynomial p) {
        ScalarField f;
        f.poly_ = std::make_shared<Polynomial>(std::move(p));
        return f;
    }

    static ScalarField callable(Fn fn, double fd_step) {
        if (!(fd_step > 0.0)) throw std::invalid_argument("ScalarField: fd_step must be > 0");
        ScalarField f;
        f.fn_ = std::make_shared<Fn>(std::move(fn));
        f.fd_step_ = fd_step;
        return f;
    }

    bool is_polynomial() const { return poly_ != nullptr; }
    const Polynomial& poly() const { return *poly_; }
    double fd_step() const { return fd_step_; }

    double operator()(const Point& p) const {
        if (poly_) return poly_->evaluate(coords_of(p));
        double v = (*fn_)(p);
        if (!std::isfinite(v)) throw std::runtime_error("ScalarField: non-finite evaluation");
        return v;
    }

  private:
    ScalarField() = default;
    std::shared_ptr<Polynomial> poly_;
    std::shared_ptr<Fn> fn_;
    double fd_step_ = 0.0;
};

}  // namespace sasaki
