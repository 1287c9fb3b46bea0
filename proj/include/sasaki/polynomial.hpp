#pragma once

// Multivariate polynomials in the coordinates (x_1..x_n, y_1..y_n, z).
// Arithmetic is exact up to floating-point rounding of the coefficients;
// this is the "exact path" the differential operators use, so inequality
// tests are not polluted by finite-difference error.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sasaki/core.hpp"

namespace sasaki {

class Polynomial {
  public:
    using Exponents = std::vector<std::uint8_t>;  // one entry per variable

    explicit Polynomial(int nvars = 3) : nvars_(nvars) {}

    static Polynomial zero(int nvars) { return Polynomial(nvars); }
    static Polynomial constant(int nvars, double c);
    static Polynomial variable(int nvars, int index);  // the monomial v_index

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    int degree() const;

    Polynomial& add_term(const Exponents& e, double coeff);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(double c) const;
    Polynomial operator-() const { return *this * -1.0; }

    Polynomial derivative(int var) const;

    double evaluate(const std::vector<double>& coords) const;

    // Pretty printer for diagnostics.
    std::string to_string() const;

    const std::map<Exponents, double>& terms() const { return terms_; }

  private:
    void prune(const Exponents& e);
    int nvars_;
    std::map<Exponents, double> terms_;
};

// Variable layout helpers for a model with CR dimension n.
inline int var_x(const ModelSpace& m, int i) { (void)m; return i; }
inline int var_y(const ModelSpace& m, int i) { return m.n + i; }
inline int var_z(const ModelSpace& m) { return 2 * m.n; }

// Frame fields applied to polynomials (exact):
//   X_i f = d_x_i f - (y_i/2) d_z f,  Y_i f = d_y_i f + (x_i/2) d_z f,  T f = d_z f
Polynomial apply_x(const ModelSpace& m, int i, const Polynomial& f);
Polynomial apply_y(const ModelSpace& m, int i, const Polynomial& f);
Polynomial apply_reeb(const ModelSpace& m, const Polynomial& f);
Polynomial apply_sublaplacian(const ModelSpace& m, const Polynomial& f);

std::vector<double> coords_of(const Point& p);

}  // namespace sasaki
