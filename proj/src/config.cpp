#include "sasaki/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sasaki {

std::vector<double> logspace(double lo, double hi, int count) {
    std::vector<double> v;
    if (count <= 0) return v;
    if (count == 1) {
        v.push_back(lo);
        return v;
    }
    for (int k = 0; k < count; ++k)
        v.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1)));
    return v;
}

std::uint64_t default_seed_from_env() {
    if (const char* s = std::getenv("SASAKI_SEED")) {
        try {
            return static_cast<std::uint64_t>(std::stoull(s));
        } catch (...) {
            // fall through to the built-in default
        }
    }
    return 12345;
}

RunConfig::RunConfig() {
    seed = default_seed_from_env();
    global_taus = logspace(0.01, 100.0, 9);
}

void RunConfig::validate() const {
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (!(quad_rel_tol > 0.0) || !(solver_tol > 0.0) || !(ineq_tol_factor > 0.0))
        throw std::invalid_argument("config: tolerances must be > 0");
    for (double nu : cd_nus)
        if (!(nu > 0.0)) throw std::invalid_argument("config: cd nu values must be > 0");
    for (double tau : global_taus)
        if (!(tau > 0.0)) throw std::invalid_argument("config: tau values must be > 0");
}

namespace {
std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) v.push_back(std::stod(item));
    }
    return v;
}

Json list_json(const std::vector<double>& v) {
    Json j = Json::array();
    for (double x : v) j.push_back(x);
    return j;
}
}  // namespace

bool RunConfig::set(const std::string& key, const std::string& value) {
    try {
        if (key == "n") n = std::stoi(value);
        else if (key == "seed") seed = std::stoull(value);
        else if (key == "quad_rel_tol") quad_rel_tol = std::stod(value);
        else if (key == "solver_tol") solver_tol = std::stod(value);
        else if (key == "ineq_tol_factor") ineq_tol_factor = std::stod(value);
        else if (key == "cd_polynomials") cd_polynomials = std::stoi(value);
        else if (key == "cd_points") cd_points = std::stoi(value);
        else if (key == "cd_max_degree") cd_max_degree = std::stoi(value);
        else if (key == "cd_nus") cd_nus = parse_list(value);
        else if (key == "liyau_t_min") liyau_t_min = std::stod(value);
        else if (key == "liyau_t_max") liyau_t_max = std::stod(value);
        else if (key == "liyau_t_count") liyau_t_count = std::stoi(value);
        else if (key == "harnack_count") harnack_count = std::stoi(value);
        else if (key == "harnack_taus") harnack_taus = parse_list(value);
        else if (key == "gaussian_eps") gaussian_eps = parse_list(value);
        else if (key == "global_taus") global_taus = parse_list(value);
        else if (key == "global_random_pairs") global_random_pairs = std::stoi(value);
        else if (key == "holdout_pairs") holdout_pairs = std::stoi(value);
        else if (key == "regime_tau") regime_tau = std::stod(value);
        else if (key == "regime_lambda_min") regime_lambda_min = std::stod(value);
        else if (key == "regime_lambda_max") regime_lambda_max = std::stod(value);
        else if (key == "regime_lambda_count") regime_lambda_count = std::stoi(value);
        else if (key == "parallel") parallel = (value == "1" || value == "true" || value == "on");
        else if (key == "out_dir") out_dir = value;
        else return false;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad value '" + value + "' for key '" + key + "'");
    }
    return true;
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: missing '=' at " + path + ":" + std::to_string(lineno));
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string s) {
            const auto b2 = s.find_first_not_of(" \t");
            if (b2 == std::string::npos) return std::string();
            const auto e2 = s.find_last_not_of(" \t");
            return s.substr(b2, e2 - b2 + 1);
        };
        key = trim(key);
        value = trim(value);
        if (!cfg.set(key, value))
            throw std::runtime_error("config: unknown key '" + key + "' at " + path + ":" +
                                     std::to_string(lineno));
    }
}

Json RunConfig::to_json() const {
    Json j = Json::object();
    j["n"] = n;
    j["seed"] = seed;
    j["quad_rel_tol"] = quad_rel_tol;
    j["solver_tol"] = solver_tol;
    j["ineq_tol_factor"] = ineq_tol_factor;
    j["cd_polynomials"] = cd_polynomials;
    j["cd_points"] = cd_points;
    j["cd_max_degree"] = cd_max_degree;
    j["cd_nus"] = list_json(cd_nus);
    j["liyau_t_min"] = liyau_t_min;
    j["liyau_t_max"] = liyau_t_max;
    j["liyau_t_count"] = liyau_t_count;
    j["harnack_count"] = harnack_count;
    j["harnack_taus"] = list_json(harnack_taus);
    j["gaussian_eps"] = list_json(gaussian_eps);
    j["global_taus"] = list_json(global_taus);
    j["global_random_pairs"] = global_random_pairs;
    j["holdout_pairs"] = holdout_pairs;
    j["regime_tau"] = regime_tau;
    j["regime_lambda_min"] = regime_lambda_min;
    j["regime_lambda_max"] = regime_lambda_max;
    j["regime_lambda_count"] = regime_lambda_count;
    j["parallel"] = parallel;
    j["out_dir"] = out_dir;
    return j;
}

}  // namespace sasaki
