#ifndef BIPHOTON_CONFIG_HPP
#define BIPHOTON_CONFIG_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "biphoton/errors.hpp"
#include "biphoton/params.hpp"

// Flat key=value configuration (UTF-8, one pair per line, `#` comments).
// Keys: lambda, lambda_p, L_p, Omega, f, c_scale, log_base. Lengths carry a
// unit suffix (m, mm, um, nm); Omega also accepts the `<number> sigma`
// multiplier form since the plus-coordinate width is usually quoted as a
// multiple of sigma.

namespace biphoton {

struct Config {
    std::optional<double> lambda, lambda_p, L_p, f;
    std::optional<double> c_scale, log_base;
    std::optional<double> omega_m;      // absolute Omega, meters
    std::optional<double> omega_sigma;  // Omega as a multiple of sigma

    /// Builds validated ExperimentParams; throws std::domain_error listing
    /// every missing required key.
    ExperimentParams make_params() const;

    /// Overlay: values present in `other` win.
    void merge(const Config& other);
};

/// Parses `value` as a length with optional unit suffix (m, mm, um, nm;
/// bare numbers are meters).
double parse_length(const std::string& value);

/// Parses a log base: `e`/`natural`, or any number > 1.
double parse_log_base(const std::string& value);

Config parse_config(std::istream& in, const std::string& path_for_errors = "<config>");
Config parse_config_file(const std::string& path);

}  // namespace biphoton

#endif
