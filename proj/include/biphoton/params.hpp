#ifndef BIPHOTON_PARAMS_HPP
#define BIPHOTON_PARAMS_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace biphoton {

/// Experiment inputs. All lengths in meters; every other module derives
/// its scales from these. Immutable after validation.
struct ExperimentParams {
    double lambda = 0.0;    // biphoton wavelength
    double lambda_p = 0.0;  // pump wavelength
    double L_p = 0.0;       // crystal length
    double Omega = 0.0;     // plus-coordinate initial width
    double c_scale = 1.0;   // dimensionless stand-in for the symbol c in the lens formulas
    double log_base = std::numbers::e;  // base for entanglement measures
    std::optional<double> f;            // lens focal length, when a lens is in play

    void validate() const;
};

/// Scale parameters derived once from ExperimentParams and shared everywhere.
struct DerivedScales {
    double sigma = 0.0;    // minus-coordinate width, sqrt(L_p*lambda_p/(6 pi))
    double k0 = 0.0;       // wavenumber 2 pi / lambda
    double z0_plus = 0.0;  // Rayleigh length k0*Omega^2
    double z0_minus = 0.0; // Rayleigh length k0*sigma^2

    double omega() const { return std::sqrt(z0_plus / k0); }
};

/// sigma = sqrt(L_p * lambda_p / (6 pi)). Throws std::domain_error naming the
/// offending field on non-positive input.
double derive_sigma(double lambda_p, double L_p);

/// Pure function: derives all scales. Identical inputs give bitwise-identical
/// outputs.
DerivedScales derive_scales(const ExperimentParams& p);

/// DerivedScales assembled directly from (sigma, Omega, k0); used by sweeps
/// that vary the Rayleigh-length ratio without round-tripping wavelengths.
DerivedScales scales_from_widths(double sigma, double Omega, double k0);

}  // namespace biphoton

#endif
