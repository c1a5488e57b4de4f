#ifndef BIPHOTON_ENTANGLE_HPP
#define BIPHOTON_ENTANGLE_HPP

#include <Eigen/Dense>

#include "biphoton/params.hpp"

// Two-mode covariance matrix of the propagated biphoton state, partial
// transpose symplectic spectrum, logarithmic negativity and the
// double-Gaussian Schmidt number.
//
// Entries are dimensionless (hbar = L = 1) and normalized so the separable
// case Omega = sigma has nu_min = 1/2, the Heisenberg floor. In that
// convention the printed second moments enter with a global factor 1/2 and
// the position-momentum covariance carries hbar/2 (not pi hbar/2), which is
// what makes det G, det H, det C independent of z. The resulting matrix
// equals the exact state moments up to the fixed local squeeze
// diag(sqrt 2, 1/sqrt 2) per mode, so every symplectic invariant matches the
// state exactly.

namespace biphoton {

/// 4x4 second-moment matrix in basis (X1, P1, X2, P2), with the scalars of
/// the symplectic standard form: det G = g^2, det H = h^2, det C = c*cp.
struct CovarianceMatrix {
    Eigen::Matrix4d entries = Eigen::Matrix4d::Zero();
    double z = 0.0;  // longitudinal position the moments were evaluated at
    double g = 0.0, h = 0.0, c = 0.0, cp = 0.0;

    double det_G() const;
    double det_H() const;
    double det_C() const;
    double det_M() const;
};

/// Symplectic eigenvalues of the partially transposed covariance matrix.
struct SymplecticSpectrum {
    double nu_1 = 0.0;  // larger
    double nu_2 = 0.0;  // smaller
    double nu_min = 0.0;
};

/// Assembles the dimensionless covariance matrix at position z.
CovarianceMatrix moments(const ExperimentParams& p, const DerivedScales& s, double z);

/// nu^2 = (D +- sqrt(D^2 - 4 det M))/2 with D = det G + det H - 2 det C.
/// Throws numerical_inconsistency_error when D^2 < 4 det M beyond tolerance,
/// which signals a broken covariance construction.
SymplecticSpectrum pt_spectrum(const CovarianceMatrix& M);

/// Closed form E_N = log sqrt(z0>/z0<) in the given base; propagation-distance
/// independent. Equals log_negativity_of(pt_spectrum(moments(...))) for all z.
double log_negativity(const DerivedScales& s, double base = std::numbers::e);

/// E_N = max{0, -log(2 nu_min)} evaluated from a spectrum.
double log_negativity_of(const SymplecticSpectrum& nu, double base = std::numbers::e);

/// Double-Gaussian Schmidt number. Evaluates both the z-dependent expression
///   K = (w+/w- + w-/w+)^2 + k0^2 w+^2 w-^2 (1/r- - 1/r+)^2
/// and the closed form (sqrt(z0-/z0+) + sqrt(z0+/z0-))^2; returns the closed
/// form and throws internal_consistency_error if they disagree beyond 1e-9
/// relative (this identity is what pins the sigma prefactor of w-).
double schmidt_number(const DerivedScales& s, double z);

/// z-dependent Schmidt expression alone (for tests and figure sweeps).
double schmidt_number_z_form(const DerivedScales& s, double z);

}  // namespace biphoton

#endif
