#ifndef BIPHOTON_LENS_HPP
#define BIPHOTON_LENS_HPP

#include <cmath>
#include <limits>
#include <numbers>

#include "biphoton/errors.hpp"
#include "biphoton/freeprop.hpp"
#include "biphoton/params.hpp"

// Thin-lens focusing of the biphoton state. The lens transmittance
// exp[-i k x^2 / (2f)] acts on the doubled-phase beam like a lens of focal
// length 2f, so the lens law appears as 1/z' + 1/(c r) - 1/(2f) throughout.
// The symbol c of the published formulas is the configurable dimensionless
// c_scale (default 1), under which c*r is the geometric radius.

namespace biphoton {

struct LensSetup {
    double f = 0.0;        // focal length
    double z = 0.0;        // crystal-to-lens distance
    double z_prime = 0.0;  // distance after the lens
    double c_scale = 1.0;

    void validate() const {
        if (!(f > 0.0)) throw std::domain_error("LensSetup: f must be strictly positive");
        if (z < 0.0) throw std::domain_error("LensSetup: z must be non-negative");
        if (z_prime < 0.0) throw std::domain_error("LensSetup: z_prime must be non-negative");
        if (!(c_scale > 0.0)) throw std::domain_error("LensSetup: c_scale must be strictly positive");
    }
};

/// Focused widths, curvature radii and Gouy phase after the lens.
struct FocusedGeometry {
    double B_plus = 0.0, B_minus = 0.0;
    double R_plus = 0.0, R_minus = 0.0;
    double zeta = 0.0;  // continuous branch
};

/// Effective propagation argument of the focused Gouy phase. This is the
/// composition of the two kernel hops through the lens:
///   u(z, z', f) = z + z' / (1 - z'/(2f)),
/// which reduces to z + z' for f -> infinity and to z at z' = 0. It diverges
/// at z' = 2f, where the accumulated phase passes exactly pi/2 per coordinate.
template <class Scalar>
Scalar lens_gouy_argument(Scalar z, Scalar z_prime, Scalar f) {
    const Scalar denom = Scalar(1) - z_prime / (Scalar(2) * f);
    if (denom == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    return z + z_prime / denom;
}

/// Continuous-branch focused Gouy phase:
///   zeta(z,z') = [arctan(u/z0+) + arctan(u/z0-)]/2  (+ pi for z' > 2f),
/// continuous in z', equal to gouy_free(z) at z' = 0 and to gouy_free(z+z')
/// for f -> infinity; equals pi/2 exactly at z' = 2f. Matches the on-axis
/// phase of the two-stage Fresnel quadrature pointwise (module oracle).
template <class Scalar>
Scalar lens_gouy_continuous(Scalar z, Scalar z_prime, Scalar f, Scalar z0_plus, Scalar z0_minus) {
    if (z_prime == Scalar(2) * f) return std::numbers::pi_v<Scalar> / Scalar(2);
    const Scalar u = lens_gouy_argument(z, z_prime, f);
    Scalar zeta = (std::atan(u / z0_plus) + std::atan(u / z0_minus)) / Scalar(2);
    if (z_prime > Scalar(2) * f) zeta += std::numbers::pi_v<Scalar>;
    return zeta;
}

/// Principal-value reduction of the focused Gouy phase: the single-arctan
/// closed form, evaluated pole-free as a rational function of z'. Range
/// (-pi/4, pi/4]; equal to lens_gouy_continuous modulo pi/2 and exactly zero
/// at z' = 2f. This is the branch the published curve follows.
template <class Scalar>
Scalar lens_gouy_principal(Scalar z, Scalar z_prime, Scalar f, Scalar z0_plus, Scalar z0_minus) {
    // u = A/d with A = 2f(z+z') - z z' and d = 2f - z'; then
    // arctan{ u S / (1 - u^2/P) } = arctan{ A S d P / (P d^2 - A^2) }.
    const Scalar d = Scalar(2) * f - z_prime;
    const Scalar A = Scalar(2) * f * (z + z_prime) - z * z_prime;
    const Scalar S = Scalar(1) / z0_plus + Scalar(1) / z0_minus;
    const Scalar P = z0_plus * z0_minus;
    const Scalar num = A * S * d * P;
    const Scalar den = P * d * d - A * A;
    if (den == Scalar(0))
        return (num > Scalar(0) ? Scalar(1) : Scalar(-1)) * std::numbers::pi_v<Scalar> / Scalar(4);
    return std::atan(num / den) / Scalar(2);
}

inline double gouy_lens(const LensSetup& setup, const DerivedScales& s) {
    setup.validate();
    return lens_gouy_continuous(setup.z, setup.z_prime, setup.f, s.z0_plus, s.z0_minus);
}

inline double gouy_lens_principal(const LensSetup& setup, const DerivedScales& s) {
    setup.validate();
    return lens_gouy_principal(setup.z, setup.z_prime, setup.f, s.z0_plus, s.z0_minus);
}

/// B^2(z,z') = [ (1/w^2)^2 + k0^2 (1/z' + 1/(c r) - 1/(2f))^2 ]
///             / [ (k0/z')^2 (1/w^2) ].
template <class Scalar>
Scalar focused_width_sq(Scalar w, Scalar r, Scalar z_prime, Scalar f, Scalar k0, Scalar c) {
    if (z_prime == Scalar(0))
        throw singular_configuration_error("focused geometry: z' = 0 is singular");
    const Scalar inv_w2 = Scalar(1) / (w * w);
    const Scalar inv_cr = std::isinf(r) ? Scalar(0) : Scalar(1) / (c * r);
    const Scalar D = Scalar(1) / z_prime + inv_cr - Scalar(1) / (Scalar(2) * f);
    const Scalar num = inv_w2 * inv_w2 + k0 * k0 * D * D;
    const Scalar den = (k0 / z_prime) * (k0 / z_prime) * inv_w2;
    return num / den;
}

/// R(z,z') exactly as published; dimensionally inhomogeneous as printed, kept
/// verbatim and unused by anything downstream. w0 is the waist of the
/// coordinate in question (Omega or sigma).
template <class Scalar>
Scalar focused_curvature(Scalar w, Scalar r, Scalar z, Scalar z_prime, Scalar f, Scalar k0,
                         Scalar c, Scalar w0) {
    if (z_prime == Scalar(0))
        throw singular_configuration_error("focused geometry: z' = 0 is singular");
    const Scalar inv_w2 = Scalar(1) / (w * w);
    const Scalar inv_cr = std::isinf(r) ? Scalar(0) : Scalar(1) / (c * r);
    const Scalar D = Scalar(1) / z_prime + inv_cr - Scalar(1) / (Scalar(2) * f);
    const Scalar num = inv_w2 * inv_w2 + k0 * k0 * D * D;
    const Scalar den = (c / z_prime) * inv_w2 *
                           (Scalar(1) + (z / z_prime + z * inv_cr) / (w0 * w0)) -
                       k0 / (Scalar(2) * f);
    if (den == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    return num / den;
}

inline FocusedGeometry focused_geometry(const LensSetup& setup, const DerivedScales& s) {
    setup.validate();
    const double Omega = s.omega();
    const double wp = beam_width(setup.z, s.z0_plus, Omega);
    const double wm = beam_width(setup.z, s.z0_minus, s.sigma);
    const double rp = curvature_radius(setup.z, s.z0_plus);
    const double rm = curvature_radius(setup.z, s.z0_minus);
    FocusedGeometry g;
    g.B_plus = std::sqrt(focused_width_sq(wp, rp, setup.z_prime, setup.f, s.k0, setup.c_scale));
    g.B_minus = std::sqrt(focused_width_sq(wm, rm, setup.z_prime, setup.f, s.k0, setup.c_scale));
    g.R_plus = focused_curvature(wp, rp, setup.z, setup.z_prime, setup.f, s.k0, setup.c_scale, Omega);
    g.R_minus = focused_curvature(wm, rm, setup.z, setup.z_prime, setup.f, s.k0, setup.c_scale, s.sigma);
    g.zeta = gouy_lens(setup, s);
    return g;
}

/// Post-lens waist position of the plus coordinate,
///   z0s+ = 2 c k0^2 w+^4 r+ (c r+ - 2f) f / [k0^2 w+^4 (c r+ - 2f)^2 + 4 f^2 c^2 r+^2],
/// which is the exact argmin over z' of B+^2. The z-dependence enters
/// through w+(z), r+(z).
inline double waist_position(double z, const LensSetup& setup, const DerivedScales& s) {
    setup.validate();
    const double c = setup.c_scale;
    const double f = setup.f;
    const double wp = beam_width(z, s.z0_plus, s.omega());
    const double rp = curvature_radius(z, s.z0_plus);
    const double w4 = wp * wp * wp * wp;
    const double k2 = s.k0 * s.k0;
    if (std::isinf(rp)) {
        // flat incoming front: r+ -> inf; take the limit of the expression
        const double den = k2 * w4 + 4.0 * f * f;
        if (den == 0.0) throw degenerate_configuration_error("waist_position: zero denominator");
        return 2.0 * k2 * w4 * f / den;
    }
    const double crm2f = c * rp - 2.0 * f;
    const double num = 2.0 * c * k2 * w4 * rp * crm2f * f;
    const double den = k2 * w4 * crm2f * crm2f + 4.0 * f * f * c * c * rp * rp;
    if (den == 0.0) throw degenerate_configuration_error("waist_position: zero denominator");
    return num / den;
}

/// Parameters of the two-dimensional Gouy-phase fit model. z' and f describe
/// the fixed optical arrangement; z0_minus is the pump-side Rayleigh length;
/// (zeta0, z_f) are the fitted parameters.
struct FitModelParams {
    double zeta0 = 0.0;    // reference angle
    double z_f = 0.0;      // abscissa offset of the pole
    double z = 0.0;        // crystal-to-lens distance
    double z_prime = 0.0;  // lens-to-detection distance
    double f = 0.0;        // focal length
    double z0_minus = 0.0;

    /// The fixed argument u = z/(1 - z'/2f) + z' of the fit model.
    double u() const {
        const double denom = 1.0 - z_prime / (2.0 * f);
        return z / denom + z_prime;
    }
};

/// zeta(z0+') = zeta0 + arctan(u/(z0+' - z_f)) + arctan(u/z0-), the
/// two-dimensional (full-arctan) model with the arctan-sum continuous-branch
/// convention. Throws pole_error at z0+' = z_f.
inline double fit_model(double z0p_shifted, const FitModelParams& p) {
    const double x = z0p_shifted - p.z_f;
    if (x == 0.0) throw pole_error("fit_model: z0+' coincides with z_f");
    const double u = p.u();
    return p.zeta0 + std::atan(u / x) + std::atan(u / p.z0_minus);
}

}  // namespace biphoton

#endif
