#include "biphoton/params.hpp"

namespace biphoton {

namespace {
void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::domain_error(std::string(name) + " must be strictly positive");
}
}  // namespace

void ExperimentParams::validate() const {
    require_positive(lambda, "lambda");
    require_positive(lambda_p, "lambda_p");
    require_positive(L_p, "L_p");
    require_positive(Omega, "Omega");
    if (!(c_scale > 0.0)) throw std::domain_error("c_scale must be strictly positive");
    if (!(log_base > 1.0)) throw std::domain_error("log_base must exceed 1");
    if (f && !(*f > 0.0)) throw std::domain_error("f must be strictly positive");
}

double derive_sigma(double lambda_p, double L_p) {
    require_positive(lambda_p, "lambda_p");
    require_positive(L_p, "L_p");
    return std::sqrt(L_p * lambda_p / (6.0 * std::numbers::pi));
}

DerivedScales derive_scales(const ExperimentParams& p) {
    p.validate();
    DerivedScales s;
    s.sigma = derive_sigma(p.lambda_p, p.L_p);
    s.k0 = 2.0 * std::numbers::pi / p.lambda;
    s.z0_plus = s.k0 * p.Omega * p.Omega;
    s.z0_minus = s.k0 * s.sigma * s.sigma;
    return s;
}

DerivedScales scales_from_widths(double sigma, double Omega, double k0) {
    require_positive(sigma, "sigma");
    require_positive(Omega, "Omega");
    require_positive(k0, "k0");
    return DerivedScales{sigma, k0, k0 * Omega * Omega, k0 * sigma * sigma};
}

}  // namespace biphoton
