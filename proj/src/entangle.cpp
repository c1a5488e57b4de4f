#include "biphoton/entangle.hpp"

#include <cmath>

#include "biphoton/errors.hpp"
#include "biphoton/freeprop.hpp"

namespace biphoton {

double CovarianceMatrix::det_G() const {
    return entries.block<2, 2>(0, 0).determinant();
}
double CovarianceMatrix::det_H() const {
    return entries.block<2, 2>(2, 2).determinant();
}
double CovarianceMatrix::det_C() const {
    return entries.block<2, 2>(0, 2).determinant();
}
double CovarianceMatrix::det_M() const {
    return entries.determinant();
}

namespace {

// Standard-form off-diagonal scalars from the local invariants:
// c^2 + cp^2 = (g^4 + (det C)^2 - det M)/g^2 and c^2 cp^2 = (det C)^2,
// with c >= |cp| and sign(c*cp) = sign(det C).
void standard_form_scalars(CovarianceMatrix& m) {
    const double dG = m.det_G();
    const double dH = m.det_H();
    const double dC = m.det_C();
    const double dM = m.det_M();
    m.g = std::sqrt(std::max(dG, 0.0));
    m.h = std::sqrt(std::max(dH, 0.0));
    if (m.g <= 0.0) {
        m.c = m.cp = 0.0;
        return;
    }
    const double sum = (dG * dH + dC * dC - dM) / (m.g * m.h);
    const double disc = std::max(sum * sum - 4.0 * dC * dC, 0.0);
    const double c2 = (sum + std::sqrt(disc)) / 2.0;
    m.c = std::sqrt(std::max(c2, 0.0));
    m.cp = (m.c > 0.0) ? dC / m.c : 0.0;
}

}  // namespace

CovarianceMatrix moments(const ExperimentParams& p, const DerivedScales& s, double z) {
    p.validate();
    const double O2 = p.Omega * p.Omega;
    const double s2 = s.sigma * s.sigma;
    const double tp = z / s.z0_plus;
    const double tm = z / s.z0_minus;

    const double xx = 0.5 * (s2 + O2) * (tp * tm + 1.0);
    const double x1x2 = 0.5 * (s2 - O2) * (tp * tm - 1.0);
    const double pp = 0.125 * (1.0 / O2 + 1.0 / s2);
    const double p1p2 = 0.125 * (1.0 / O2 - 1.0 / s2);
    const double xp = 0.25 * (tp + tm);    // <x1 p1 + p1 x1>/2 per mode
    const double x1p2 = 0.25 * (tp - tm);  // <x1 p2> = <x2 p1>

    CovarianceMatrix m;
    m.z = z;
    m.entries << xx, xp, x1x2, x1p2,
                 xp, pp, x1p2, p1p2,
                 x1x2, x1p2, xx, xp,
                 x1p2, p1p2, xp, pp;
    standard_form_scalars(m);
    return m;
}

SymplecticSpectrum pt_spectrum(const CovarianceMatrix& M) {
    const double dG = M.det_G();
    const double dH = M.det_H();
    const double dC = M.det_C();
    const double dM = M.det_M();
    const double delta = dG + dH - 2.0 * dC;  // partial transpose flips det C
    double disc = delta * delta - 4.0 * dM;
    if (disc < -1e-9 * std::max(delta * delta, 1e-300))
        throw numerical_inconsistency_error(
            "pt_spectrum: (det G + det H - 2 det C)^2 < 4 det M; covariance matrix is not physical");
    disc = std::max(disc, 0.0);
    const double root = std::sqrt(disc);
    SymplecticSpectrum nu;
    nu.nu_1 = std::sqrt((delta + root) / 2.0);
    nu.nu_2 = std::sqrt(std::max((delta - root) / 2.0, 0.0));
    nu.nu_min = std::min(nu.nu_1, nu.nu_2);
    return nu;
}

double log_negativity(const DerivedScales& s, double base) {
    const double ratio = (s.z0_plus <= s.z0_minus) ? s.z0_minus / s.z0_plus
                                                   : s.z0_plus / s.z0_minus;
    return std::log(std::sqrt(ratio)) / std::log(base);
}

double log_negativity_of(const SymplecticSpectrum& nu, double base) {
    return std::max(0.0, -std::log(2.0 * nu.nu_min)) / std::log(base);
}

double schmidt_number_z_form(const DerivedScales& s, double z) {
    const double wp = beam_width(z, s.z0_plus, s.omega());
    const double wm = beam_width(z, s.z0_minus, s.sigma);
    const double rp = curvature_radius(z, s.z0_plus);
    const double rm = curvature_radius(z, s.z0_minus);
    const double inv_rp = std::isinf(rp) ? 0.0 : 1.0 / rp;
    const double inv_rm = std::isinf(rm) ? 0.0 : 1.0 / rm;
    const double ratio = wp / wm + wm / wp;
    const double curv = s.k0 * wp * wm * (inv_rm - inv_rp);
    return ratio * ratio + curv * curv;
}

double schmidt_number(const DerivedScales& s, double z) {
    const double root = std::sqrt(s.z0_minus / s.z0_plus);
    const double closed = (root + 1.0 / root) * (root + 1.0 / root);
    const double zform = schmidt_number_z_form(s, z);
    if (std::abs(zform - closed) > 1e-9 * closed)
        throw internal_consistency_error(
            "schmidt_number: z-dependent expression disagrees with the closed form");
    return closed;
}

}  // namespace biphoton
