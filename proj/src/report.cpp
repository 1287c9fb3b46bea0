#include "sasaki/report.hpp"

#include <cstdio>
#include <sstream>

namespace sasaki {

Json InequalityReport::to_json() const {
    Json j = Json::object();
    j["name"] = name;
    j["inputs"] = inputs;
    if (error.empty()) {
        j["lhs"] = lhs;
        j["rhs"] = rhs;
        j["margin"] = margin;
        j["tol"] = tol;
        j["pass"] = pass;
        Json prov = Json::object();
        for (const auto& [k, v] : provenance) {
            prov[k] = Json{{"value", v.value}, {"scheme", v.scheme}, {"err", v.err}};
        }
        j["provenance"] = prov;
    } else {
        j["pass"] = false;
        j["error"] = error;
    }
    if (!note.empty()) j["note"] = note;
    return j;
}

Json FitResult::to_json() const {
    Json j = Json::object();
    Json c = Json::object();
    for (const auto& [k, v] : constants) c[k] = v;
    j["constants"] = c;
    j["feasible"] = feasible;
    j["max_violation"] = max_violation;
    j["sample_size"] = sample_size;
    j["sample"] = sample_description;
    if (!extra.empty()) j["extra"] = extra;
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
    return os.str();
}

}  // namespace sasaki
