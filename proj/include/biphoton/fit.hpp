#ifndef BIPHOTON_FIT_HPP
#define BIPHOTON_FIT_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "biphoton/lens.hpp"

// Nonlinear least squares for the two-parameter (zeta0, z_f) Gouy-phase
// model, plus deterministic synthetic-data generation for recovery tests.
// All lengths in meters internally; CSV I/O uses millimeters.

namespace biphoton {

struct DataSet {
    struct Row {
        double z0p = 0.0;    // shifted Rayleigh range (m)
        double zeta = 0.0;   // measured Gouy phase (rad)
        double weight = 1.0;
    };
    std::vector<Row> rows;

    /// Finite values, no duplicate abscissae within 1e-12 m. `for_fit` also
    /// demands at least 4 rows for the 2-parameter fit.
    void validate(bool for_fit = true) const;
};

struct FitResult {
    double zeta0 = 0.0;  // rad
    double z_f = 0.0;    // m
    Eigen::VectorXd residuals;  // model - data, per point (rad)
    double rss = 0.0;
    int iterations = 0;
    long evaluations = 0;
    bool converged = false;
    std::string message;
};

/// Minimizes sum_i w_i (fit_model(z0p_i) - zeta_i)^2 over (zeta0, z_f) with a
/// deterministic Nelder-Mead descent plus a shrinking restart ladder.
/// Internally zeta0 is stepped in radians and z_f in millimeters so the
/// simplex stays well conditioned. Accepted best rss is monotone
/// non-increasing; convergence when the relative rss spread < tol (default
/// 1e-10) or the scaled parameter step < 1e-12; hard cap of 1e5 model
/// evaluations, after which the result carries converged = false and a
/// diagnostic message. Evaluations at the z0p = z_f pole are rejected (worst
/// possible value), which shrinks the step.
FitResult fit(const DataSet& data, const FitModelParams& fixed,
              std::pair<double, double> init, double tol = 1e-10);

/// Deterministic synthetic data on the model curve, with seeded Gaussian
/// noise (Box-Muller over mt19937_64, so the stream is identical across
/// standard libraries). Grid points must stay at least 1e-6 m away from the
/// z_f pole.
DataSet synthesize(const FitModelParams& params, const std::vector<double>& grid,
                   double noise_std, std::uint64_t seed);

/// CSV: header `z0_plus_mm,zeta_rad[,weight]`, `#` comments ignored, extra
/// columns ignored (so figure overlay files parse unchanged). Throws
/// data_parse_error with `<path>:<line>:` context on malformed input.
DataSet read_dataset_csv(std::istream& in, const std::string& path_for_errors = "<stream>");
DataSet read_dataset_csv_file(const std::string& path);

void write_dataset_csv(std::ostream& out, const DataSet& data);

/// Residuals CSV: z0_plus_mm,zeta_model_rad,zeta_data_rad,residual_rad.
void write_residuals_csv(std::ostream& out, const DataSet& data, const FitModelParams& fixed,
                         const FitResult& result);

/// Flat key=value summary of a fit result.
void write_fit_result(std::ostream& out, const FitResult& result);

}  // namespace biphoton

#endif
