#pragma once

// Differential operators on scalar fields: horizontal gradient, sub-Laplacian,
// Reeb derivative, the iterated forms Gamma_2 and Gamma_2^T, the Killing
// identity residual, and the curvature-dimension residual
//
//   Gamma_2(f) + nu Gamma_2^T(f) - [ (1/2n)(Df)^2 - (1/nu)|grad_H f|^2 + (n/2)(Tf)^2 ]
//
// which is nonnegative on the model space for every smooth f and nu > 0.
//
// Polynomial fields go through exact symbolic algebra; callables go through
// central differences along the exact frame-field flows, with a step-halving
// error estimate.

#include <vector>

#include "sasaki/core.hpp"
#include "sasaki/scalar_field.hpp"

namespace sasaki {

enum class Scheme { Exact, FiniteDifference };

struct OperatorResult {
    double value = 0.0;
    Scheme scheme = Scheme::Exact;
    double est_error = 0.0;  // 0 for exact
};

struct GradientResult {
    std::vector<double> values;  // (X_1 f, .., X_n f, Y_1 f, .., Y_n f)
    Scheme scheme = Scheme::Exact;
    double est_error = 0.0;

    double norm_squared() const {
        double s = 0.0;
        for (double v : values) s += v * v;
        return s;
    }
};

GradientResult horizontal_gradient(const ModelSpace& m, const ScalarField& f, const Point& p);
OperatorResult sublaplacian(const ModelSpace& m, const ScalarField& f, const Point& p);
OperatorResult reeb_derivative(const ModelSpace& m, const ScalarField& f, const Point& p);

// Gamma_2(f)   = [ D|grad_H f|^2 - 2 <grad_H f, grad_H Df> ] / 2
// Gamma_2^T(f) = [ D(Tf)^2 - 2 (Tf)(T Df) ] / 2
OperatorResult gamma2(const ModelSpace& m, const ScalarField& f, const Point& p);
OperatorResult gamma2_T(const ModelSpace& m, const ScalarField& f, const Point& p);

// <grad_H f, grad_H (Tf)^2> - (Tf) (T |grad_H f|^2); identically zero on the
// model space because T is a Killing field of the sub-Riemannian structure.
OperatorResult killing_identity_residual(const ModelSpace& m, const ScalarField& f, const Point& p);

// Curvature-dimension residual; nonnegative for every f and nu > 0.
OperatorResult cd_residual(const ModelSpace& m, const ScalarField& f, const Point& p, double nu);

}  // namespace sasaki
