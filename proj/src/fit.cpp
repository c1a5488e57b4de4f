#include "biphoton/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace biphoton {

void DataSet::validate(bool for_fit) const {
    if (for_fit && rows.size() < 4)
        throw std::domain_error("DataSet: a 2-parameter fit needs at least 4 rows, got " +
                                std::to_string(rows.size()));
    for (const auto& r : rows) {
        if (!std::isfinite(r.z0p) || !std::isfinite(r.zeta) || !std::isfinite(r.weight))
            throw std::domain_error("DataSet: non-finite entry");
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (std::abs(rows[i].z0p - rows[j].z0p) < 1e-12)
                throw std::domain_error("DataSet: duplicate z0p abscissa");
}

namespace {

constexpr double kZfScale = 1e-3;  // z_f stepped in mm
constexpr long kMaxEvals = 100000;

struct Objective {
    const DataSet& data;
    FitModelParams model;
    long evals = 0;

    // scaled parameters: x = (zeta0 [rad], z_f [mm])
    double operator()(const Eigen::Vector2d& x) {
        ++evals;
        model.zeta0 = x[0];
        model.z_f = x[1] * kZfScale;
        double rss = 0.0;
        for (const auto& r : data.rows) {
            const double dx = r.z0p - model.z_f;
            if (dx == 0.0) return std::numeric_limits<double>::infinity();  // pole: reject
            const double res = fit_model(r.z0p, model) - r.zeta;
            rss += r.weight * res * res;
        }
        return rss;
    }
};

struct SimplexOutcome {
    Eigen::Vector2d best;
    double rss;
    int iterations;
    bool converged;
};

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
// shrink 1/2) on 2 parameters; fully deterministic.
SimplexOutcome nelder_mead(Objective& obj, const Eigen::Vector2d& start, double radius,
                           double tol) {
    std::array<Eigen::Vector2d, 3> pts = {start, start, start};
    pts[1][0] += radius;
    pts[2][1] += radius;
    std::array<double, 3> f = {obj(pts[0]), obj(pts[1]), obj(pts[2])};

    auto order = [&] {
        std::array<int, 3> idx = {0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
        std::array<Eigen::Vector2d, 3> p2 = {pts[idx[0]], pts[idx[1]], pts[idx[2]]};
        std::array<double, 3> f2 = {f[idx[0]], f[idx[1]], f[idx[2]]};
        pts = p2;
        f = f2;
    };

    int iter = 0;
    bool converged = false;
    while (obj.evals < kMaxEvals) {
        ++iter;
        order();
        const double spread = f[2] - f[0];
        const double diam = std::max((pts[1] - pts[0]).norm(), (pts[2] - pts[0]).norm());
        if (spread <= tol * std::max(std::abs(f[0]), 1e-300) || diam < 1e-12) {
            converged = true;
            break;
        }
        const Eigen::Vector2d centroid = (pts[0] + pts[1]) / 2.0;
        const Eigen::Vector2d refl = centroid + (centroid - pts[2]);
        const double fr = obj(refl);
        if (fr < f[0]) {
            const Eigen::Vector2d exp_pt = centroid + 2.0 * (centroid - pts[2]);
            const double fe = obj(exp_pt);
            if (fe < fr) {
                pts[2] = exp_pt;
                f[2] = fe;
            } else {
                pts[2] = refl;
                f[2] = fr;
            }
        } else if (fr < f[1]) {
            pts[2] = refl;
            f[2] = fr;
        } else {
            const Eigen::Vector2d con =
                centroid + 0.5 * ((fr < f[2] ? refl : pts[2]) - centroid);
            const double fc = obj(con);
            if (fc < std::min(fr, f[2])) {
                pts[2] = con;
                f[2] = fc;
            } else {
                // shrink toward the best point
                pts[1] = pts[0] + 0.5 * (pts[1] - pts[0]);
                pts[2] = pts[0] + 0.5 * (pts[2] - pts[0]);
                f[1] = obj(pts[1]);
                f[2] = obj(pts[2]);
            }
        }
    }
    order();
    return {pts[0], f[0], iter, converged};
}

}  // namespace

namespace {

// The model is a step between two arctan branches at the z_f pole, so rss
// is piecewise-flat in z_f with cliffs at every data abscissa. A simplex
// alone stalls in whichever inter-point basin it starts in; zeta0 enters
// linearly, so profile it out and scan one z_f candidate per basin first.
Eigen::Vector2d profile_scan(const DataSet& data, const FitModelParams& fixed) {
    std::vector<double> xs;
    xs.reserve(data.rows.size());
    for (const auto& r : data.rows) xs.push_back(r.z0p);
    std::sort(xs.begin(), xs.end());
    std::vector<double> candidates;
    const double span = std::max(xs.back() - xs.front(), 1e-6);
    candidates.push_back(xs.front() - 0.05 * span);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        candidates.push_back((xs[i] + xs[i + 1]) / 2.0);
    candidates.push_back(xs.back() + 0.05 * span);

    FitModelParams m = fixed;
    double best_rss = std::numeric_limits<double>::infinity();
    Eigen::Vector2d best(0.0, 0.0);
    for (double zf : candidates) {
        m.z_f = zf;
        m.zeta0 = 0.0;
        double wsum = 0.0, num = 0.0;
        for (const auto& r : data.rows) {
            num += r.weight * (r.zeta - fit_model(r.z0p, m));
            wsum += r.weight;
        }
        const double zeta0 = num / wsum;
        double rss = 0.0;
        for (const auto& r : data.rows) {
            const double res = zeta0 + fit_model(r.z0p, m) - r.zeta;
            rss += r.weight * res * res;
        }
        if (rss < best_rss) {
            best_rss = rss;
            best = {zeta0, zf / kZfScale};
        }
    }
    return best;
}

}  // namespace

FitResult fit(const DataSet& data, const FitModelParams& fixed, std::pair<double, double> init,
              double tol) {
    data.validate(true);
    if (!std::isfinite(init.first) || !std::isfinite(init.second))
        throw std::domain_error("fit: non-finite initial guess");
    if (!(tol > 0.0)) throw std::domain_error("fit: tol must be positive");

    Objective obj{data, fixed};

    // restart ladder: re-seed the simplex around the best point at shrinking
    // radii; the model is nearly flat in z_f between pole brackets, so the
    // late fine restarts are what polish the degenerate direction.
    const double radii[] = {0.25, 1e-2, 1e-4, 1e-6, 1e-8};
    const std::array<Eigen::Vector2d, 2> starts = {
        Eigen::Vector2d(init.first, init.second / kZfScale), profile_scan(data, fixed)};
    int iterations = 0;
    bool converged = false;
    double rss = std::numeric_limits<double>::infinity();
    Eigen::Vector2d x = starts[0];
    for (const auto& start : starts) {
        Eigen::Vector2d cur = start;
        bool cur_converged = false;
        double cur_rss = std::numeric_limits<double>::infinity();
        for (double r : radii) {
            const auto out = nelder_mead(obj, cur, r, tol);
            iterations += out.iterations;
            cur_converged = out.converged;
            cur = out.best;
            cur_rss = out.rss;
            if (obj.evals >= kMaxEvals) break;
        }
        if (cur_rss < rss) {
            rss = cur_rss;
            x = cur;
            converged = cur_converged;
        }
        if (obj.evals >= kMaxEvals) break;
    }

    FitResult res;
    res.zeta0 = x[0];
    res.z_f = x[1] * kZfScale;
    res.rss = rss;
    res.iterations = iterations;
    res.evaluations = obj.evals;
    res.converged = converged && obj.evals < kMaxEvals;
    if (!res.converged)
        res.message = "fit did not converge within " + std::to_string(kMaxEvals) +
                      " model evaluations (reached rss = " + std::to_string(rss) + ")";

    FitModelParams m = fixed;
    m.zeta0 = res.zeta0;
    m.z_f = res.z_f;
    res.residuals.resize(static_cast<Eigen::Index>(data.rows.size()));
    for (std::size_t i = 0; i < data.rows.size(); ++i)
        res.residuals[static_cast<Eigen::Index>(i)] = fit_model(data.rows[i].z0p, m) - data.rows[i].zeta;
    return res;
}

DataSet synthesize(const FitModelParams& params, const std::vector<double>& grid,
                   double noise_std, std::uint64_t seed) {
    for (double g : grid)
        if (std::abs(g - params.z_f) < 1e-6)
            throw std::domain_error("synthesize: grid point within 1e-6 m of the z_f pole");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return ((rng() >> 11) + 0.5) * 0x1.0p-53; };
    auto normal = [&]() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };
    DataSet out;
    out.rows.reserve(grid.size());
    for (double g : grid) {
        DataSet::Row r;
        r.z0p = g;
        r.zeta = fit_model(g, params) + (noise_std > 0.0 ? noise_std * normal() : 0.0);
        out.rows.push_back(r);
    }
    out.validate(false);
    return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& ctx) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw data_parse_error(ctx + ": not a number: '" + s + "'");
    }
    if (pos != s.size()) throw data_parse_error(ctx + ": trailing characters in '" + s + "'");
    return v;
}

}  // namespace

DataSet read_dataset_csv(std::istream& in, const std::string& path) {
    DataSet out;
    std::string line;
    int line_no = 0;
    int col_z0p = -1, col_zeta = -1, col_weight = -1;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto ctx = path + ":" + std::to_string(line_no);
        std::string stripped = line;
        if (!stripped.empty() && stripped.back() == '\r') stripped.pop_back();
        if (stripped.empty()) continue;
        if (stripped[0] == '#') continue;
        const auto cells = split_csv(stripped);
        if (!have_header) {
            for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
                if (cells[i] == "z0_plus_mm") col_z0p = i;
                else if (cells[i] == "zeta_rad") col_zeta = i;
                else if (cells[i] == "weight") col_weight = i;
            }
            if (col_z0p < 0 || col_zeta < 0)
                throw data_parse_error(ctx +
                                         ": header must name columns z0_plus_mm and zeta_rad");
            have_header = true;
            continue;
        }
        if (static_cast<int>(cells.size()) <= std::max(col_z0p, col_zeta))
            throw data_parse_error(ctx + ": too few columns");
        DataSet::Row r;
        r.z0p = parse_double(cells[col_z0p], ctx) * 1e-3;
        r.zeta = parse_double(cells[col_zeta], ctx);
        if (col_weight >= 0 && col_weight < static_cast<int>(cells.size()) &&
            !cells[col_weight].empty())
            r.weight = parse_double(cells[col_weight], ctx);
        out.rows.push_back(r);
    }
    if (!have_header) throw data_parse_error(path + ": empty file (no header row)");
    out.validate(false);
    return out;
}

DataSet read_dataset_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_parse_error(path + ": cannot open");
    return read_dataset_csv(in, path);
}

namespace {
void put(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out << buf;
}
}  // namespace

void write_dataset_csv(std::ostream& out, const DataSet& data) {
    out << "z0_plus_mm,zeta_rad,weight\n";
    for (const auto& r : data.rows) {
        put(out, r.z0p * 1e3);
        out << ",";
        put(out, r.zeta);
        out << ",";
        put(out, r.weight);
        out << "\n";
    }
}

void write_residuals_csv(std::ostream& out, const DataSet& data, const FitModelParams& fixed,
                         const FitResult& result) {
    FitModelParams m = fixed;
    m.zeta0 = result.zeta0;
    m.z_f = result.z_f;
    out << "z0_plus_mm,zeta_model_rad,zeta_data_rad,residual_rad\n";
    for (const auto& r : data.rows) {
        const double model = fit_model(r.z0p, m);
        put(out, r.z0p * 1e3);
        out << ",";
        put(out, model);
        out << ",";
        put(out, r.zeta);
        out << ",";
        put(out, model - r.zeta);
        out << "\n";
    }
}

void write_fit_result(std::ostream& out, const FitResult& result) {
    out << "zeta0_rad=";
    put(out, result.zeta0);
    out << "\nz_f_mm=";
    put(out, result.z_f * 1e3);
    out << "\nrss=";
    put(out, result.rss);
    out << "\niterations=" << result.iterations << "\nevaluations=" << result.evaluations
        << "\nconverged=" << (result.converged ? 1 : 0) << "\n";
    if (!result.message.empty()) out << "# " << result.message << "\n";
}

}  // namespace biphoton
