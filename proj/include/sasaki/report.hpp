#pragma once

// Inequality reports: one record per checked instance, carrying both sides,
// the margin, the tolerance, and the provenance of every numeric that went
// into it. pass <=> margin >= -tol by construction.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace sasaki {

using Json = nlohmann::ordered_json;

struct Provenance {
    double value = 0.0;
    std::string scheme;  // "analytic" | "exact-poly" | "fd" | "quadrature" | "shooting" | "closed-form" | "mc"
    double err = 0.0;
};

struct InequalityReport {
    std::string name;
    Json inputs = Json::object();
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    double tol = 0.0;
    bool pass = false;
    std::map<std::string, Provenance> provenance;
    std::string note;   // e.g. recorded statement/proof discrepancies
    std::string error;  // nonempty if the instance could not be evaluated

    static InequalityReport make(std::string name, double lhs, double rhs, double tol) {
        InequalityReport r;
        r.name = std::move(name);
        r.lhs = lhs;
        r.rhs = rhs;
        r.margin = rhs - lhs;
        r.tol = tol;
        r.pass = r.margin >= -tol;
        return r;
    }

    static InequalityReport failure(std::string name, std::string what) {
        InequalityReport r;
        r.name = std::move(name);
        r.error = std::move(what);
        r.pass = false;
        return r;
    }

    InequalityReport& with_input(const std::string& key, const Json& v) {
        inputs[key] = v;
        return *this;
    }
    InequalityReport& with_prov(const std::string& key, double value, std::string scheme, double err) {
        provenance[key] = Provenance{value, std::move(scheme), err};
        return *this;
    }

    Json to_json() const;
};

struct FitResult {
    std::map<std::string, double> constants;  // {"A","B"} or {"C_eps"} etc.
    bool feasible = false;
    double max_violation = 0.0;  // over the fitted sample, at the fitted constants
    std::string sample_description;
    int sample_size = 0;
    Json extra = Json::object();

    Json to_json() const;
};

// CSV helpers: header + rows, deterministic float formatting.
std::string format_double(double v);
std::string csv_line(const std::vector<std::string>& cells);

}  // namespace sasaki
