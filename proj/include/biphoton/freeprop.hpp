#ifndef BIPHOTON_FREEPROP_HPP
#define BIPHOTON_FREEPROP_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "biphoton/params.hpp"

// Free-space evolution of the double-Gaussian biphoton state: widths,
// curvature radii, Gouy phase, full complex wavefunction. All formulas use
// the doubled-phase kernel convention (phase k0 (x-x')^2 / z), under which
// z0 = k0 w0^2 and the per-coordinate on-axis phase is -arctan(z/z0)/2.
//
// Normalization is fixed in relative coordinates (r,q) = ((x1+x2)/2,(x1-x2)/2)
// with the measure 2 dr dq (the Jacobian of (x1,x2) -> (r,q)).
//
// Note: the minus-coordinate width uses the sigma prefactor,
// w-(z)^2 = sigma^2 [1 + (z/z0-)^2]; the Omega prefactor sometimes quoted for
// both coordinates cannot reproduce the initial state at z = 0 and breaks the
// Schmidt-number identity checked in entangle.

namespace biphoton {

/// w(z) = w0 sqrt(1 + (z/z0)^2). Call with (z0_plus, Omega) for the plus
/// coordinate and (z0_minus, sigma) for the minus coordinate.
template <class Scalar>
Scalar beam_width(Scalar z, Scalar z0, Scalar w0) {
    if (!(z0 > Scalar(0))) throw std::domain_error("beam_width: z0 must be strictly positive");
    if (!(w0 > Scalar(0))) throw std::domain_error("beam_width: w0 must be strictly positive");
    const Scalar t = z / z0;
    return w0 * std::sqrt(Scalar(1) + t * t);
}

/// r(z) = z (1 + (z0/z)^2); +infinity at z = 0 (flat wavefront). Consumers
/// invert it, so the sentinel turns into 1/r = 0.
template <class Scalar>
Scalar curvature_radius(Scalar z, Scalar z0) {
    if (!(z0 > Scalar(0))) throw std::domain_error("curvature_radius: z0 must be strictly positive");
    if (z == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    const Scalar t = z0 / z;
    return z * (Scalar(1) + t * t);
}

/// Half-sum Gouy phase, continuous and strictly increasing in z with range
/// (-pi/2, pi/2). Never evaluated through the combined single-arctan fraction,
/// which jumps by pi/2 at z^2 = z0+ z0-.
template <class Scalar>
Scalar gouy_half_sum(Scalar z, Scalar z0_plus, Scalar z0_minus) {
    return (std::atan(z / z0_plus) + std::atan(z / z0_minus)) / Scalar(2);
}

inline double gouy_free(double z, const DerivedScales& s) {
    return gouy_half_sum(z, s.z0_plus, s.z0_minus);
}

/// Beam geometry of both relative coordinates at longitudinal position z.
struct BeamGeometry {
    double z = 0.0;
    double w_plus = 0.0, w_minus = 0.0;  // beam widths
    double r_plus = 0.0, r_minus = 0.0;  // signed curvature radii (inf at waist)
    double zeta = 0.0;                   // biphoton Gouy phase
    double zeta_plus = 0.0, zeta_minus = 0.0;  // arctan(z/z0+-)
};

inline BeamGeometry beam_geometry(double z, const DerivedScales& s) {
    BeamGeometry g;
    g.z = z;
    g.w_plus = beam_width(z, s.z0_plus, s.omega());
    g.w_minus = beam_width(z, s.z0_minus, s.sigma);
    g.r_plus = curvature_radius(z, s.z0_plus);
    g.r_minus = curvature_radius(z, s.z0_minus);
    g.zeta_plus = std::atan(z / s.z0_plus);
    g.zeta_minus = std::atan(z / s.z0_minus);
    g.zeta = (g.zeta_plus + g.zeta_minus) / 2.0;
    return g;
}

/// Complex value of the propagated state at relative coordinates (r, q).
struct BiphotonAmplitude {
    double re = 0.0, im = 0.0;
    double r = 0.0, q = 0.0;

    std::complex<double> value() const { return {re, im}; }
};

/// Psi(r,q,z) = exp(-r^2/w+^2 - q^2/w-^2) / sqrt(4 pi w+ w-)
///            * exp(-i [ -k0 r^2/r+ - k0 q^2/r- + zeta ]).
/// geom must have been computed from the same scales at the same z.
inline BiphotonAmplitude wavefunction(double r, double q, const BeamGeometry& geom,
                                      const DerivedScales& s) {
    const double inv_rp = std::isinf(geom.r_plus) ? 0.0 : 1.0 / geom.r_plus;
    const double inv_rm = std::isinf(geom.r_minus) ? 0.0 : 1.0 / geom.r_minus;
    const double wp2 = geom.w_plus * geom.w_plus;
    const double wm2 = geom.w_minus * geom.w_minus;
    const double mag = std::exp(-r * r / wp2 - q * q / wm2) /
                       std::sqrt(4.0 * std::numbers::pi * geom.w_plus * geom.w_minus);
    const double phase = -(-s.k0 * r * r * inv_rp - s.k0 * q * q * inv_rm + geom.zeta);
    BiphotonAmplitude a;
    a.re = mag * std::cos(phase);
    a.im = mag * std::sin(phase);
    a.r = r;
    a.q = q;
    return a;
}

}  // namespace biphoton

#endif
