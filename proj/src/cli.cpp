#include "biphoton/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "biphoton/config.hpp"
#include "biphoton/entangle.hpp"
#include "biphoton/figures.hpp"
#include "biphoton/fit.hpp"
#include "biphoton/freeprop.hpp"
#include "biphoton/lens.hpp"
#include "biphoton/minimize.hpp"
#include "biphoton/oracle.hpp"
#include "biphoton/svg.hpp"

namespace biphoton {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

double wrap_pi(double a) {
    a = std::fmod(a + std::numbers::pi, 2.0 * std::numbers::pi);
    if (a < 0) a += 2.0 * std::numbers::pi;
    return a - std::numbers::pi;
}

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

void print_checks(const std::vector<Check>& checks, std::ostream& out) {
    for (const auto& c : checks)
        out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
}

}  // namespace

bool run_verify(const VerifyOptions& opts, std::ostream& out) {
    std::vector<Check> checks;
    ExperimentParams p;
    p.lambda = opts.lambda;
    p.lambda_p = opts.lambda_p;
    p.L_p = opts.L_p;
    p.Omega = opts.omega_over_sigma * derive_sigma(opts.lambda_p, opts.L_p);
    p.c_scale = opts.c_scale;
    const DerivedScales s = derive_scales(p);
    QuadratureSpec spec;
    spec.n_points = 1024;
    spec.half_width = 10.0;

    try {  // free-propagation Gouy phase vs quadrature
        const double z = s.z0_minus;
        const auto v = propagate_1d(s.sigma, z, s.k0, spec, 0.0);
        const double err = std::abs(wrap_pi(std::arg(v) + 0.5 * std::atan(z / s.z0_minus)));
        const auto v2 = propagate_1d(p.Omega, 0.6 * s.z0_plus, s.k0, spec, 0.0);
        const double err2 = std::abs(wrap_pi(std::arg(v2) + 0.5 * std::atan(0.6)));
        const double worst = std::max(err, err2);
        checks.push_back({"freeprop phase", worst < 1e-6,
                          "max |quadrature - closed form| = " + fmt(worst, "%.3g") + " rad"});
    } catch (const std::exception& e) {
        checks.push_back({"freeprop phase", false, e.what()});
    }

    try {  // lensed Gouy phase vs quadrature
        const double z0 = s.z0_minus, z = 3.0 * z0, f = 2.0 * z0, zp = 1.5 * z0;
        const auto v = propagate_lens_1d(s.sigma, z, f, zp, s.k0, spec, 0.0);
        const double phi = lens_gouy_continuous(z, zp, f, z0, z0);  // z0+ = z0- here
        const double err = std::abs(wrap_pi(std::arg(v) + 0.5 * phi));
        checks.push_back({"lens phase", err < 1e-5,
                          "|quadrature - closed form| = " + fmt(err, "%.3g") + " rad"});
    } catch (const std::exception& e) {
        checks.push_back({"lens phase", false, e.what()});
    }

    try {  // covariance moments vs independent Gaussian integrals
        const double z = 2.0 * s.z0_minus;
        const CovarianceMatrix m = moments(p, s, z);
        const MomentSet g = gaussian_moments(p, s, z);
        double worst = 0.0;
        auto rel = [&](double a, double b) {
            return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
        };
        worst = std::max(worst, rel(m.entries(0, 0), g.xx));
        worst = std::max(worst, rel(m.entries(0, 2), g.x1x2));
        worst = std::max(worst, rel(m.entries(1, 1), g.pp));
        worst = std::max(worst, rel(m.entries(1, 3), g.p1p2));
        worst = std::max(worst, rel(m.entries(0, 1), g.sigma_xp));
        worst = std::max(worst, rel(m.entries(0, 3), g.x1p2));
        checks.push_back({"moments", worst < 1e-10,
                          "max relative entry difference = " + fmt(worst, "%.3g")});
    } catch (const std::exception& e) {
        checks.push_back({"moments", false, e.what()});
    }

    try {  // waist position vs argmin of the focused width
        // f chosen so the incoming front has c r+ > 2f and a real waist forms
        LensSetup setup{0.1, 0.3, 0.1, opts.c_scale};
        const double predicted = waist_position(setup.z, setup, s);
        const auto width2 = [&](double zp) {
            LensSetup sweep = setup;
            sweep.z_prime = zp;
            const FocusedGeometry fg = focused_geometry(sweep, s);
            return fg.B_plus * fg.B_plus;
        };
        const double argmin = golden_section_min(width2, 1e-5, 2.0);
        const double rel = std::abs(predicted - argmin) / std::abs(predicted);
        checks.push_back({"waist", rel < 1e-4,
                          "formula vs argmin relative difference = " + fmt(rel, "%.3g")});
    } catch (const std::exception& e) {
        checks.push_back({"waist", false, e.what()});
    }

    try {  // Schmidt identity
        double worst = 0.0;
        const double closed = schmidt_number(s, 0.0);
        for (double z : {0.0, s.z0_minus, 10.0 * s.z0_minus}) {
            const double zf = schmidt_number_z_form(s, z);
            worst = std::max(worst, std::abs(zf - closed) / closed);
        }
        checks.push_back({"schmidt identity", worst < 1e-9,
                          "max relative mismatch = " + fmt(worst, "%.3g")});
    } catch (const std::exception& e) {
        checks.push_back({"schmidt identity", false, e.what()});
    }

    try {  // negativity z-independence and closed form
        const double closed = log_negativity(s);
        double lo = 1e300, hi = -1e300, worst = 0.0;
        for (double mult : {0.0, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0}) {
            const double en = log_negativity_of(pt_spectrum(moments(p, s, mult * s.z0_minus)));
            lo = std::min(lo, en);
            hi = std::max(hi, en);
            worst = std::max(worst, std::abs(en - closed));
        }
        const bool ok = (hi - lo) < 1e-10 && worst < 1e-10;
        checks.push_back({"negativity z-independence", ok,
                          "spread = " + fmt(hi - lo, "%.3g") +
                              ", |pipeline - closed| = " + fmt(worst, "%.3g")});
    } catch (const std::exception& e) {
        checks.push_back({"negativity z-independence", false, e.what()});
    }

    print_checks(checks, out);
    bool all = true;
    for (const auto& c : checks) all = all && c.pass;
    out << (all ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return all;
}

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_path;
    int points = -1;
    bool svg = false;
    // direct parameter overrides
    std::string lambda, lambda_p, L_p, omega, f, c_scale, log_base;
};

Config resolve_config(const GlobalOpts& g) {
    Config cfg;
    if (!g.config_path.empty()) cfg = parse_config_file(g.config_path);
    Config flags;
    if (!g.lambda.empty()) flags.lambda = parse_length(g.lambda);
    if (!g.lambda_p.empty()) flags.lambda_p = parse_length(g.lambda_p);
    if (!g.L_p.empty()) flags.L_p = parse_length(g.L_p);
    if (!g.f.empty()) flags.f = parse_length(g.f);
    if (!g.c_scale.empty()) flags.c_scale = std::stod(g.c_scale);
    if (!g.log_base.empty()) flags.log_base = parse_log_base(g.log_base);
    if (!g.omega.empty()) {
        std::istringstream iss(g.omega);
        double num = 0.0;
        std::string suffix;
        if ((iss >> num) && (iss >> suffix) && suffix == "sigma") {
            flags.omega_sigma = num;
        } else {
            flags.omega_m = parse_length(g.omega);
        }
    }
    cfg.merge(flags);
    return cfg;
}

void print_scales(const ExperimentParams& p, const DerivedScales& s, std::ostream& out) {
    out << "sigma    = " << fmt(s.sigma * 1e6) << " um\n";
    out << "k0       = " << fmt(s.k0) << " 1/m\n";
    out << "z0_plus  = " << fmt(s.z0_plus * 1e3) << " mm\n";
    out << "z0_minus = " << fmt(s.z0_minus * 1e3) << " mm\n";
    out << "Omega    = " << fmt(p.Omega * 1e6) << " um\n";
    out << "sigma_m=" << fmt(s.sigma, "%.12g") << "\n";
    out << "k0_per_m=" << fmt(s.k0, "%.12g") << "\n";
    out << "z0_plus_m=" << fmt(s.z0_plus, "%.12g") << "\n";
    out << "z0_minus_m=" << fmt(s.z0_minus, "%.12g") << "\n";
    out << "Omega_m=" << fmt(p.Omega, "%.12g") << "\n";
}

int default_points(const std::string& id) {
    if (id.rfind("fig2", 0) == 0 || id.rfind("fig3", 0) == 0) return 200;
    return 400;
}

std::string svg_path_for(const std::string& csv_path) {
    const auto dot = csv_path.find_last_of('.');
    return (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".svg";
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"double-Gaussian biphoton beam toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--config", g.config_path, "key=value configuration file");
    app.add_option("--out", g.out_path, "output path");
    app.add_option("--points", g.points, "grid points for sweeps");
    app.add_flag("--svg", g.svg, "also render an SVG next to the CSV");
    app.add_option("--lambda", g.lambda, "biphoton wavelength (e.g. 702nm)");
    app.add_option("--lambda-p", g.lambda_p, "pump wavelength");
    app.add_option("--Lp", g.L_p, "crystal length");
    app.add_option("--omega", g.omega, "plus-coordinate width (length or '<n> sigma')");
    app.add_option("--f", g.f, "lens focal length");
    app.add_option("--c-scale", g.c_scale, "dimensionless c in the lens formulas");
    app.add_option("--log-base", g.log_base, "log base for entanglement measures (e, 2, 10)");

    auto* cmd_derive = app.add_subcommand("derive", "derive sigma, k0 and Rayleigh lengths");

    auto* cmd_figure = app.add_subcommand("figure", "emit plot data for a published figure");
    std::string figure_id, figure_data;
    cmd_figure->add_option("id", figure_id, "figure id (fig1..fig6)")->required();
    cmd_figure->add_option("--data", figure_data, "experimental CSV (fig5)");

    auto* cmd_verify = app.add_subcommand("verify", "run the oracle-vs-closed-form suite");

    auto* cmd_fit = app.add_subcommand("fit", "fit (zeta0, z_f) to measured Gouy phases");
    std::string fit_data, fit_z = "500mm", fit_zp = "1465.3mm", fit_f = "200mm",
                fit_z0m = "1.2mm";
    double init_zeta0 = 1.68;
    std::string init_zf = "7.15mm";
    double fit_tol = 1e-10;
    cmd_fit->add_option("--data", fit_data, "input CSV (z0_plus_mm,zeta_rad[,weight])")
        ->required();
    cmd_fit->add_option("--z", fit_z, "crystal-to-lens distance");
    cmd_fit->add_option("--zprime", fit_zp, "lens-to-detection distance");
    cmd_fit->add_option("--focal", fit_f, "focal length");
    cmd_fit->add_option("--z0minus", fit_z0m, "pump-side Rayleigh length");
    cmd_fit->add_option("--init-zeta0", init_zeta0, "initial reference angle (rad)");
    cmd_fit->add_option("--init-zf", init_zf, "initial z_f");
    cmd_fit->add_option("--tol", fit_tol, "relative rss convergence tolerance");

    auto* cmd_gouy = app.add_subcommand("gouy", "free-propagation geometry and Gouy phase");
    std::string gouy_z;
    cmd_gouy->add_option("--z", gouy_z, "longitudinal position")->required();

    auto* cmd_entangle = app.add_subcommand("entangle", "entanglement measures");
    std::string entangle_z = "0";
    cmd_entangle->add_option("--z", entangle_z, "longitudinal position");

    auto* cmd_lens = app.add_subcommand("lens", "focused geometry after a thin lens");
    std::string lens_zp, lens_z = "0";
    cmd_lens->add_option("--zprime", lens_zp, "distance after the lens")->required();
    cmd_lens->add_option("--z", lens_z, "crystal-to-lens distance");

    auto* cmd_waist = app.add_subcommand("waist", "post-lens beam waist position");
    std::string waist_z = "0";
    cmd_waist->add_option("--z", waist_z, "crystal-to-lens distance");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (cmd_derive->parsed()) {
            const Config cfg = resolve_config(g);
            const ExperimentParams p = cfg.make_params();
            print_scales(p, derive_scales(p), out);
            return 0;
        }

        if (cmd_figure->parsed()) {
            const Config cfg = resolve_config(g);
            FigureRequest req;
            req.figure_id = figure_id;
            req.grid_points = g.points > 0 ? g.points : default_points(figure_id);
            req.output_path = g.out_path.empty() ? figure_id + ".csv" : g.out_path;
            req.data_path = figure_data;
            const FigureTable table = emit_figure(req, cfg);
            out << "wrote " << req.output_path << " (" << table.columns[0].size() << " rows)\n";
            if (g.svg) {
                const std::string svg_path = svg_path_for(req.output_path);
                std::ofstream svg_out(svg_path, std::ios::binary);
                if (!svg_out) throw std::runtime_error("cannot write " + svg_path);
                render_svg(svg_out, table);
                out << "wrote " << svg_path << "\n";
            }
            return 0;
        }

        if (cmd_verify->parsed()) {
            const Config cfg = resolve_config(g);
            VerifyOptions opts;
            if (cfg.c_scale) opts.c_scale = *cfg.c_scale;
            if (cfg.lambda) opts.lambda = *cfg.lambda;
            if (cfg.lambda_p) opts.lambda_p = *cfg.lambda_p;
            if (cfg.L_p) opts.L_p = *cfg.L_p;
            if (cfg.omega_sigma) opts.omega_over_sigma = *cfg.omega_sigma;
            if (cfg.omega_m)
                opts.omega_over_sigma = *cfg.omega_m / derive_sigma(opts.lambda_p, opts.L_p);
            return run_verify(opts, out) ? 0 : 1;
        }

        if (cmd_fit->parsed()) {
            const DataSet data = read_dataset_csv_file(fit_data);
            FitModelParams fixed;
            fixed.z = parse_length(fit_z);
            fixed.z_prime = parse_length(fit_zp);
            fixed.f = parse_length(fit_f);
            fixed.z0_minus = parse_length(fit_z0m);
            const FitResult res = fit(data, fixed, {init_zeta0, parse_length(init_zf)}, fit_tol);

            const std::string stem = g.out_path.empty() ? "fit_result" : g.out_path;
            std::ofstream rf(stem + ".txt", std::ios::binary);
            if (!rf) throw std::runtime_error("cannot write " + stem + ".txt");
            write_fit_result(rf, res);
            std::ofstream cf(stem + "_residuals.csv", std::ios::binary);
            if (!cf) throw std::runtime_error("cannot write " + stem + "_residuals.csv");
            write_residuals_csv(cf, data, fixed, res);

            out << "zeta0 = " << fmt(res.zeta0) << " rad\n";
            out << "z_f   = " << fmt(res.z_f * 1e3) << " mm\n";
            out << "rss   = " << fmt(res.rss, "%.6g") << " (" << data.rows.size()
                << " points), iterations = " << res.iterations << "\n";
            out << "wrote " << stem << ".txt, " << stem << "_residuals.csv\n";
            if (!res.converged) {
                err << "fit did not converge: " << res.message << "\n";
                return 3;
            }
            return 0;
        }

        const Config cfg = resolve_config(g);

        if (cmd_gouy->parsed()) {
            const ExperimentParams p = cfg.make_params();
            const DerivedScales s = derive_scales(p);
            const double z = parse_length(gouy_z);
            const BeamGeometry geom = beam_geometry(z, s);
            out << "z        = " << fmt(z * 1e3) << " mm\n";
            out << "w_plus   = " << fmt(geom.w_plus * 1e6) << " um\n";
            out << "w_minus  = " << fmt(geom.w_minus * 1e6) << " um\n";
            out << "r_plus   = " << fmt(geom.r_plus * 1e3) << " mm\n";
            out << "r_minus  = " << fmt(geom.r_minus * 1e3) << " mm\n";
            out << "zeta     = " << fmt(geom.zeta, "%.12g") << " rad\n";
            out << "zeta_plus=" << fmt(geom.zeta_plus, "%.12g")
                << " zeta_minus=" << fmt(geom.zeta_minus, "%.12g") << "\n";
            return 0;
        }

        if (cmd_entangle->parsed()) {
            const ExperimentParams p = cfg.make_params();
            const DerivedScales s = derive_scales(p);
            const double z = parse_length(entangle_z);
            const CovarianceMatrix m = moments(p, s, z);
            const SymplecticSpectrum nu = pt_spectrum(m);
            out << "E_N          = " << fmt(log_negativity(s, p.log_base), "%.12g") << "\n";
            out << "E_N_pipeline = " << fmt(log_negativity_of(nu, p.log_base), "%.12g") << "\n";
            out << "nu_1 = " << fmt(nu.nu_1, "%.12g") << ", nu_2 = " << fmt(nu.nu_2, "%.12g")
                << "\n";
            out << "K_dG = " << fmt(schmidt_number(s, z), "%.12g") << "\n";
            return 0;
        }

        if (cmd_lens->parsed()) {
            const ExperimentParams p = cfg.make_params();
            if (!p.f) throw std::domain_error("lens: focal length f missing (config key f or --f)");
            const DerivedScales s = derive_scales(p);
            LensSetup setup{*p.f, parse_length(lens_z), parse_length(lens_zp), p.c_scale};
            const FocusedGeometry fg = focused_geometry(setup, s);
            out << "B_plus  = " << fmt(fg.B_plus * 1e6) << " um\n";
            out << "B_minus = " << fmt(fg.B_minus * 1e6) << " um\n";
            out << "R_plus  = " << fmt(fg.R_plus, "%.6g") << "\n";
            out << "R_minus = " << fmt(fg.R_minus, "%.6g") << "\n";
            out << "zeta    = " << fmt(fg.zeta, "%.12g") << " rad\n";
            out << "zeta_principal = "
                << fmt(gouy_lens_principal(setup, s), "%.12g") << " rad\n";
            return 0;
        }

        if (cmd_waist->parsed()) {
            const ExperimentParams p = cfg.make_params();
            if (!p.f) throw std::domain_error("waist: focal length f missing (config key f or --f)");
            const DerivedScales s = derive_scales(p);
            const double z = parse_length(waist_z);
            LensSetup setup{*p.f, z, 1.0, p.c_scale};
            out << "z0s_plus = " << fmt(waist_position(z, setup, s) * 1e3, "%.12g") << " mm\n";
            return 0;
        }
    } catch (const config_parse_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const data_parse_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace biphoton
