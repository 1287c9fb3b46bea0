#include "sasaki/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sasaki {

Polynomial Polynomial::constant(int nvars, double c) {
    Polynomial p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::invalid_argument("Polynomial::variable: bad index");
    Polynomial p(nvars);
    Exponents e(nvars, 0);
    e[index] = 1;
    p.add_term(e, 1.0);
    return p;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (auto x : e) s += x;
        if (s > d) d = s;
    }
    return d;
}

Polynomial& Polynomial::add_term(const Exponents& e, double coeff) {
    if (static_cast<int>(e.size()) != nvars_)
        throw std::invalid_argument("Polynomial::add_term: exponent arity mismatch");
    terms_[e] += coeff;
    prune(e);
    return *this;
}

void Polynomial::prune(const Exponents& e) {
    auto it = terms_.find(e);
    if (it != terms_.end() && it->second == 0.0) terms_.erase(it);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("Polynomial: arity mismatch in product");
    Polynomial r(nvars_);
    Exponents e(nvars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (int k = 0; k < nvars_; ++k) e[k] = static_cast<std::uint8_t>(ea[k] + eb[k]);
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::operator*(double c) const {
    Polynomial r(nvars_);
    if (c == 0.0) return r;
    for (const auto& [e, coeff] : terms_) r.add_term(e, coeff * c);
    return r;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw std::invalid_argument("Polynomial::derivative: bad variable");
    Polynomial r(nvars_);
    Exponents e(nvars_);
    for (const auto& [ea, c] : terms_) {
        if (ea[var] == 0) continue;
        e = ea;
        e[var] -= 1;
        r.add_term(e, c * static_cast<double>(ea[var]));
    }
    return r;
}

double Polynomial::evaluate(const std::vector<double>& coords) const {
    if (static_cast<int>(coords.size()) != nvars_)
        throw std::invalid_argument("Polynomial::evaluate: coordinate arity mismatch");
    double total = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c;
        for (int k = 0; k < nvars_; ++k) {
            for (int j = 0; j < e[k]; ++j) term *= coords[k];
        }
        total += term;
    }
    return total;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        for (int k = 0; k < nvars_; ++k)
            if (e[k] > 0) os << "*v" << k << "^" << static_cast<int>(e[k]);
    }
    return os.str();
}

std::vector<double> coords_of(const Point& p) {
    std::vector<double> c = p.xy;
    c.push_back(p.z);
    return c;
}

Polynomial apply_x(const ModelSpace& m, int i, const Polynomial& f) {
    // X_i f = d_x_i f - (y_i/2) d_z f
    Polynomial yi = Polynomial::variable(f.nvars(), var_y(m, i));
    return f.derivative(var_x(m, i)) - yi * f.derivative(var_z(m)) * 0.5;
}

Polynomial apply_y(const ModelSpace& m, int i, const Polynomial& f) {
    // Y_i f = d_y_i f + (x_i/2) d_z f
    Polynomial xi = Polynomial::variable(f.nvars(), var_x(m, i));
    return f.derivative(var_y(m, i)) + xi * f.derivative(var_z(m)) * 0.5;
}

Polynomial apply_reeb(const ModelSpace& m, const Polynomial& f) { return f.derivative(var_z(m)); }

Polynomial apply_sublaplacian(const ModelSpace& m, const Polynomial& f) {
    Polynomial r(f.nvars());
    for (int i = 0; i < m.n; ++i) {
        r = r + apply_x(m, i, apply_x(m, i, f));
        r = r + apply_y(m, i, apply_y(m, i, f));
    }
    return r;
}

}  // namespace sasaki
