#include "biphoton/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace biphoton {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double unit_factor(const std::string& unit) {
    if (unit.empty() || unit == "m") return 1.0;
    if (unit == "mm") return 1e-3;
    if (unit == "um" || unit == "µm" || unit == "μm") return 1e-6;
    if (unit == "nm") return 1e-9;
    if (unit == "pm") return 1e-12;
    return -1.0;
}

// splits "57 um" / "57um" / "5 sigma" into number and suffix
bool split_number_suffix(const std::string& value, double& number, std::string& suffix) {
    const std::string v = trim(value);
    std::size_t pos = 0;
    try {
        number = std::stod(v, &pos);
    } catch (const std::exception&) {
        return false;
    }
    suffix = trim(v.substr(pos));
    return true;
}

}  // namespace

double parse_length(const std::string& value) {
    double num = 0.0;
    std::string suffix;
    if (!split_number_suffix(value, num, suffix))
        throw std::invalid_argument("not a length: '" + value + "'");
    const double factor = unit_factor(suffix);
    if (factor < 0.0)
        throw std::invalid_argument("unknown length unit '" + suffix + "' in '" + value + "'");
    return num * factor;
}

double parse_log_base(const std::string& value) {
    const std::string v = trim(value);
    if (v == "e" || v == "natural") return std::numbers::e;
    double num = 0.0;
    std::string suffix;
    if (!split_number_suffix(v, num, suffix) || !suffix.empty() || !(num > 1.0))
        throw std::invalid_argument("log_base must be 'e' or a number > 1, got '" + value + "'");
    return num;
}

void Config::merge(const Config& other) {
    if (other.lambda) lambda = other.lambda;
    if (other.lambda_p) lambda_p = other.lambda_p;
    if (other.L_p) L_p = other.L_p;
    if (other.f) f = other.f;
    if (other.c_scale) c_scale = other.c_scale;
    if (other.log_base) log_base = other.log_base;
    if (other.omega_m) {
        omega_m = other.omega_m;
        omega_sigma.reset();
    }
    if (other.omega_sigma) {
        omega_sigma = other.omega_sigma;
        omega_m.reset();
    }
}

ExperimentParams Config::make_params() const {
    std::vector<std::string> missing;
    if (!lambda) missing.push_back("lambda");
    if (!lambda_p) missing.push_back("lambda_p");
    if (!L_p) missing.push_back("L_p");
    if (!omega_m && !omega_sigma) missing.push_back("Omega");
    if (!missing.empty()) {
        std::string msg = "missing required key(s):";
        for (const auto& k : missing) msg += " " + k;
        msg += " (required: lambda, lambda_p, L_p, Omega; optional: f, c_scale, log_base)";
        throw std::domain_error(msg);
    }
    ExperimentParams p;
    p.lambda = *lambda;
    p.lambda_p = *lambda_p;
    p.L_p = *L_p;
    p.Omega = omega_m ? *omega_m : *omega_sigma * derive_sigma(p.lambda_p, p.L_p);
    if (c_scale) p.c_scale = *c_scale;
    if (log_base) p.log_base = *log_base;
    if (f) p.f = *f;
    p.validate();
    return p;
}

Config parse_config(std::istream& in, const std::string& path) {
    Config cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = line;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw config_parse_error(path + ":" + std::to_string(line_no) +
                                         ": expected key = value, got '" + s + "'",
                                     line_no);
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        try {
            if (key == "lambda") cfg.lambda = parse_length(value);
            else if (key == "lambda_p") cfg.lambda_p = parse_length(value);
            else if (key == "L_p") cfg.L_p = parse_length(value);
            else if (key == "f") cfg.f = parse_length(value);
            else if (key == "c_scale") cfg.c_scale = std::stod(value);
            else if (key == "log_base") cfg.log_base = parse_log_base(value);
            else if (key == "Omega") {
                double num = 0.0;
                std::string suffix;
                if (split_number_suffix(value, num, suffix) && suffix == "sigma") {
                    cfg.omega_sigma = num;
                    cfg.omega_m.reset();
                } else {
                    cfg.omega_m = parse_length(value);
                    cfg.omega_sigma.reset();
                }
            } else {
                throw config_parse_error(path + ":" + std::to_string(line_no) +
                                             ": unknown key '" + key + "'",
                                         line_no);
            }
        } catch (const config_parse_error&) {
            throw;
        } catch (const std::exception& e) {
            throw config_parse_error(
                path + ":" + std::to_string(line_no) + ": " + key + ": " + e.what(), line_no);
        }
    }
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_parse_error(path + ": cannot open", 0);
    return parse_config(in, path);
}

}  // namespace biphoton
