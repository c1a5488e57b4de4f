#include "biphoton/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "biphoton/entangle.hpp"
#include "biphoton/fit.hpp"
#include "biphoton/freeprop.hpp"
#include "biphoton/lens.hpp"

namespace biphoton {

namespace {

// Inputs of the published analysis, used when the config does not override.
constexpr double kLambda = 702e-9;
constexpr double kLambdaP = 351.1e-9;
constexpr double kLp = 7e-3;
// Figure constants as printed in the captions.
constexpr double kFigZ0 = 1.2e-3;        // z0 used by figs 3-6
constexpr double kFig4F = 3e-3;          // fig 4 lens
constexpr double kFig4Z = 7e-3;
constexpr double kFit_f = 200e-3;        // figs 5-6 arrangement
constexpr double kFit_z = 500e-3;
constexpr double kFit_zp = 1465.3e-3;
constexpr double kFitZeta0 = 1.68;
constexpr double kFitZf = 7.15e-3;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> out(n);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) out[i] = std::exp(la + (lb - la) * i / (n - 1));
    return out;
}

ExperimentParams base_params(const Config& cfg, double omega_sigma_mult) {
    Config c = cfg;
    if (!c.lambda) c.lambda = kLambda;
    if (!c.lambda_p) c.lambda_p = kLambdaP;
    if (!c.L_p) c.L_p = kLp;
    if (!c.omega_m && !c.omega_sigma) c.omega_sigma = omega_sigma_mult;
    return c.make_params();
}

FigureTable fig1(const Config& cfg, int n) {
    ExperimentParams p5 = base_params(cfg, 5.0);
    ExperimentParams p10 = p5;
    const double sigma = derive_sigma(p5.lambda_p, p5.L_p);
    p5.Omega = 5.0 * sigma;
    p10.Omega = 10.0 * sigma;
    const DerivedScales s5 = derive_scales(p5);
    const DerivedScales s10 = derive_scales(p10);

    FigureTable t;
    t.comments = {"figure: fig1 (biphoton Gouy phase vs z)",
                  "lambda_m = " + fmt(p5.lambda), "lambda_p_m = " + fmt(p5.lambda_p),
                  "L_p_m = " + fmt(p5.L_p), "sigma_m = " + fmt(sigma),
                  "Omega = 5 sigma and 10 sigma", "z range: [-100, 100] mm"};
    t.column_names = {"z_mm", "zeta_omega5_rad", "zeta_omega10_rad"};
    const auto zs = linspace(-100.0, 100.0, n);
    t.columns.resize(3);
    for (double z_mm : zs) {
        const double z = z_mm * 1e-3;
        t.columns[0].push_back(z_mm);
        t.columns[1].push_back(gouy_free(z, s5));
        t.columns[2].push_back(gouy_free(z, s10));
    }
    return t;
}

FigureTable fig2(const Config& cfg, int n, bool upper) {
    const double base = cfg.log_base.value_or(std::numbers::e);
    FigureTable t;
    const double lo = upper ? 1.0 : 0.01;
    const double hi = upper ? 20.0 : 1.0;
    t.comments = {std::string("figure: ") + (upper ? "fig2b" : "fig2a") +
                      " (logarithmic negativity vs log sqrt Schmidt number)",
                  "ratio z0+/z0- in [" + fmt(lo) + ", " + fmt(hi) + "], log-spaced",
                  "log_base = " + fmt(base)};
    t.column_names = {"z0p_over_z0m", "log_negativity", "log_sqrt_schmidt"};
    t.columns.resize(3);
    for (double ratio : logspace(lo, hi, n)) {
        // negativity and Schmidt number depend only on the Rayleigh ratio
        const DerivedScales s = scales_from_widths(1.0, std::sqrt(ratio), 1.0);
        t.columns[0].push_back(ratio);
        t.columns[1].push_back(log_negativity(s, base));
        t.columns[2].push_back(std::log(std::sqrt(schmidt_number(s, 0.0))) / std::log(base));
    }
    return t;
}

FigureTable fig3(const Config& cfg, int n, char panel) {
    const double base = cfg.log_base.value_or(std::numbers::e);
    const bool upper = (panel == 'c' || panel == 'd');
    const bool phase = (panel == 'b' || panel == 'd');
    const double z = 20e-3;
    const double z0m = kFigZ0;
    const double k0 = 2.0 * std::numbers::pi / cfg.lambda.value_or(kLambda);
    const double lo = upper ? 1.0 : 0.01;
    const double hi = upper ? 20.0 : 1.0;

    FigureTable t;
    t.comments = {std::string("figure: fig3") + panel + (phase ? " (Gouy phase" : " (log negativity") +
                      " vs Rayleigh ratio)",
                  "z_m = " + fmt(z), "z0_minus_m = " + fmt(z0m),
                  "ratio z0+/z0- in [" + fmt(lo) + ", " + fmt(hi) + "], log-spaced",
                  "log_base = " + fmt(base)};
    t.column_names = {"z0p_over_z0m", phase ? "zeta_rad" : "log_negativity"};
    t.columns.resize(2);
    for (double ratio : logspace(lo, hi, n)) {
        const double z0p = ratio * z0m;
        const DerivedScales s = scales_from_widths(std::sqrt(z0m / k0), std::sqrt(z0p / k0), k0);
        t.columns[0].push_back(ratio);
        t.columns[1].push_back(phase ? gouy_free(z, s) : log_negativity(s, base));
    }
    return t;
}

FigureTable fig4(const Config& cfg, int n) {
    const double k0 = 2.0 * std::numbers::pi / cfg.lambda.value_or(kLambda);
    const double z0 = kFigZ0;
    const DerivedScales s = scales_from_widths(std::sqrt(z0 / k0), std::sqrt(z0 / k0), k0);
    FigureTable t;
    t.comments = {"figure: fig4 (focused Gouy phase vs z')",
                  "z0_plus_m = " + fmt(z0), "z0_minus_m = " + fmt(z0),
                  "f_m = " + fmt(kFig4F), "z_m = " + fmt(kFig4Z),
                  "zeta_rad: continuous branch; zeta_principal_rad: principal value,"
                  " zero at z' = 2f"};
    t.column_names = {"z_prime_mm", "zeta_rad", "zeta_principal_rad"};
    t.columns.resize(3);
    for (double zp_mm : linspace(0.0, 12.0, n)) {
        LensSetup setup{kFig4F, kFig4Z, zp_mm * 1e-3, cfg.c_scale.value_or(1.0)};
        t.columns[0].push_back(zp_mm);
        t.columns[1].push_back(gouy_lens(setup, s));
        t.columns[2].push_back(gouy_lens_principal(setup, s));
    }
    return t;
}

FitModelParams fig5_model(const Config& cfg) {
    FitModelParams m;
    m.zeta0 = kFitZeta0;
    m.z_f = kFitZf;
    m.z = kFit_z;
    m.z_prime = kFit_zp;
    m.f = cfg.f.value_or(kFit_f);
    m.z0_minus = kFigZ0;
    return m;
}

FigureTable fig5(const Config& cfg, const std::string& data_path) {
    if (data_path.empty())
        throw std::domain_error("fig5 needs the experimental-data CSV (--data <path>)");
    const DataSet data = read_dataset_csv_file(data_path);
    const FitModelParams m = fig5_model(cfg);
    FigureTable t;
    t.comments = {"figure: fig5 (Gouy phase vs shifted Rayleigh range, data overlay)",
                  "data: " + data_path,
                  "zeta0_rad = " + fmt(m.zeta0), "z_f_m = " + fmt(m.z_f),
                  "z_m = " + fmt(m.z), "z_prime_m = " + fmt(m.z_prime),
                  "f_m = " + fmt(m.f), "z0_minus_m = " + fmt(m.z0_minus)};
    t.column_names = {"z0_plus_mm", "zeta_rad", "zeta_model_rad"};
    t.columns.resize(3);
    t.points_column = 1;
    for (const auto& r : data.rows) {
        t.columns[0].push_back(r.z0p * 1e3);
        t.columns[1].push_back(r.zeta);
        t.columns[2].push_back(fit_model(r.z0p, m));
    }
    return t;
}

FigureTable fig6(const Config& cfg, int n) {
    const double k0 = 2.0 * std::numbers::pi / cfg.lambda.value_or(kLambda);
    const double c = cfg.c_scale.value_or(1.0);
    FigureTable t;
    t.comments = {"figure: fig6 (post-lens beam waist position vs Rayleigh range)",
                  "f_m = " + fmt(kFit_f), "z_m = " + fmt(kFit_z),
                  "z0_plus range: [0.1, 5000] mm, log-spaced",
                  "c_scale = " + fmt(c)};
    t.column_names = {"z0_plus_mm", "z0s_plus_mm"};
    t.columns.resize(2);
    const double sigma = derive_sigma(cfg.lambda_p.value_or(kLambdaP), cfg.L_p.value_or(kLp));
    for (double z0p_mm : logspace(0.1, 5000.0, n)) {
        const double z0p = z0p_mm * 1e-3;
        const DerivedScales s = scales_from_widths(sigma, std::sqrt(z0p / k0), k0);
        LensSetup setup{kFit_f, kFit_z, 1.0, c};  // z' unused by the waist formula
        t.columns[0].push_back(z0p_mm);
        t.columns[1].push_back(waist_position(kFit_z, setup, s) * 1e3);
    }
    return t;
}

}  // namespace

const std::vector<std::string>& known_figure_ids() {
    static const std::vector<std::string> ids = {"fig1", "fig2a", "fig2b", "fig3a", "fig3b",
                                                 "fig3c", "fig3d", "fig4", "fig5", "fig6"};
    return ids;
}

void FigureRequest::validate() const {
    const auto& ids = known_figure_ids();
    if (std::find(ids.begin(), ids.end(), figure_id) == ids.end())
        throw std::domain_error("unknown figure id '" + figure_id + "'");
    if (grid_points < 50) throw std::domain_error("grid_points must be >= 50");
}

void write_table_csv(std::ostream& out, const FigureTable& table) {
    for (const auto& c : table.comments) out << "# " << c << "\n";
    for (std::size_t i = 0; i < table.column_names.size(); ++i)
        out << table.column_names[i] << (i + 1 < table.column_names.size() ? "," : "");
    out << "\n";
    if (table.columns.empty()) return;
    const std::size_t rows = table.columns[0].size();
    char buf[32];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.12g", table.columns[c][r]);
            out << buf << (c + 1 < table.columns.size() ? "," : "");
        }
        out << "\n";
    }
}

FigureTable emit_figure(const FigureRequest& req, const Config& cfg) {
    req.validate();
    const int n = req.grid_points;
    FigureTable t;
    if (req.figure_id == "fig1") t = fig1(cfg, n);
    else if (req.figure_id == "fig2a") t = fig2(cfg, n, false);
    else if (req.figure_id == "fig2b") t = fig2(cfg, n, true);
    else if (req.figure_id == "fig3a") t = fig3(cfg, n, 'a');
    else if (req.figure_id == "fig3b") t = fig3(cfg, n, 'b');
    else if (req.figure_id == "fig3c") t = fig3(cfg, n, 'c');
    else if (req.figure_id == "fig3d") t = fig3(cfg, n, 'd');
    else if (req.figure_id == "fig4") t = fig4(cfg, n);
    else if (req.figure_id == "fig5") t = fig5(cfg, req.data_path);
    else t = fig6(cfg, n);

    if (!req.output_path.empty()) {
        std::ofstream out(req.output_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + req.output_path);
        write_table_csv(out, t);
    }
    return t;
}

}  // namespace biphoton
