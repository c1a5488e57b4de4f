#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "biphoton/cli.hpp"
#include "biphoton/fit.hpp"

using namespace biphoton;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_dir() {
    const fs::path d = fs::temp_directory_path() / "biphoton_cli_tests";
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("derive prints the published scales") {
    const CliRun r = run({"derive", "--lambda", "702nm", "--lambda-p", "351.1nm", "--Lp", "7mm",
                          "--omega", "5 sigma"});
    CHECK(r.code == 0);
    CHECK(r.out.find("sigma_m=1.1418") != std::string::npos);
    const auto pos = r.out.find("z0_minus_m=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 11)) == doctest::Approx(1.167e-3).epsilon(1e-3));
}

TEST_CASE("derive without Omega lists the missing key and exits 2") {
    const CliRun r = run({"derive", "--lambda", "702nm", "--lambda-p", "351.1nm", "--Lp", "7mm"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Omega") != std::string::npos);
    CHECK(r.err.find("required") != std::string::npos);
}

TEST_CASE("omega accepts the sigma-multiplier form") {
    const CliRun r5 = run({"derive", "--lambda", "702nm", "--lambda-p", "351.1nm", "--Lp", "7mm",
                           "--omega", "5 sigma"});
    const CliRun r1 = run({"derive", "--lambda", "702nm", "--lambda-p", "351.1nm", "--Lp", "7mm",
                           "--omega", "1 sigma"});
    auto grab = [](const std::string& text, const std::string& key) {
        const auto pos = text.find(key + "=");
        REQUIRE(pos != std::string::npos);
        return std::stod(text.substr(pos + key.size() + 1));
    };
    const double z0p5 = grab(r5.out, "z0_plus_m");
    const double z0m = grab(r5.out, "z0_minus_m");
    CHECK(z0p5 == doctest::Approx(25.0 * z0m).epsilon(1e-9));
    CHECK(grab(r1.out, "z0_plus_m") == doctest::Approx(z0m).epsilon(1e-9));
}

TEST_CASE("corrupted config exits 2 with a line number") {
    const fs::path cfg = temp_dir() / "broken.cfg";
    write_file(cfg, "lambda = 702 nm\nOmega 57 um\n");
    const CliRun r = run({"derive", "--config", cfg.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find(":2") != std::string::npos);
}

TEST_CASE("figures are byte-identical across runs") {
    const fs::path dir = temp_dir();
    for (const std::string id : {"fig1", "fig2a", "fig4", "fig6"}) {
        const fs::path a = dir / (id + "_a.csv");
        const fs::path b = dir / (id + "_b.csv");
        CHECK(run({"figure", id, "--out", a.string(), "--points", "120"}).code == 0);
        CHECK(run({"figure", id, "--out", b.string(), "--points", "120"}).code == 0);
        CHECK(slurp(a) == slurp(b));
    }
}

TEST_CASE("fig1 columns approach pi/2 and keep the Omega ordering") {
    const fs::path out = temp_dir() / "fig1.csv";
    REQUIRE(run({"figure", "fig1", "--out", out.string(), "--points", "200"}).code == 0);
    std::ifstream in(out);
    std::string line;
    double z = 0, z5 = 0, z10 = 0;
    bool warned = false;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'z') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        row >> z >> z5 >> z10;
        ++rows;
        if (z > 0.0 && z5 <= z10) warned = true;
        CHECK(z5 < std::numbers::pi / 2);
        CHECK(z5 > -std::numbers::pi / 2);
    }
    CHECK(rows == 200);
    CHECK_FALSE(warned);
    // last row is z = +100 mm, where zeta(5 sigma) = 1.423
    CHECK(z == doctest::Approx(100.0));
    CHECK(z5 > 1.4);
}

TEST_CASE("fig4 principal phase crosses zero at z' = 6 mm") {
    const fs::path out = temp_dir() / "fig4.csv";
    REQUIRE(run({"figure", "fig4", "--out", out.string(), "--points", "241"}).code == 0);
    std::ifstream in(out);
    std::string line;
    double prev_zp = 0, prev_principal = 0;
    bool crossed = false;
    bool have_prev = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'z') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double zp, cont, principal;
        row >> zp >> cont >> principal;
        if (have_prev && prev_principal < 0.0 && principal >= 0.0) {
            CHECK(prev_zp < 6.0 + 1e-9);
            CHECK(zp >= 6.0 - 0.1);
            if (zp >= 5.9 && zp <= 6.1) crossed = true;
        }
        prev_zp = zp;
        prev_principal = principal;
        have_prev = true;
    }
    CHECK(crossed);
}

TEST_CASE("fig2a gap at ratio 1 is log 2") {
    const fs::path out = temp_dir() / "fig2a.csv";
    REQUIRE(run({"figure", "fig2a", "--out", out.string(), "--points", "101"}).code == 0);
    std::ifstream in(out);
    std::string line;
    double ratio = 0, en = 0, logk = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'z') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        row >> ratio >> en >> logk;
    }
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(en == doctest::Approx(0.0));
    CHECK(logk == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("figure --svg renders a plot next to the CSV") {
    const fs::path out = temp_dir() / "fig1_svg.csv";
    REQUIRE(run({"figure", "fig1", "--out", out.string(), "--points", "80", "--svg"}).code == 0);
    const std::string svg = slurp(temp_dir() / "fig1_svg.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("unknown figure id fails with a usage error") {
    const CliRun r = run({"figure", "fig9"});
    CHECK(r.code == 2);
}

TEST_CASE("fig5 without a data file is a usage error") {
    const CliRun r = run({"figure", "fig5", "--out", (temp_dir() / "f5.csv").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("--data") != std::string::npos);
}

TEST_CASE("grid_points below the floor is rejected") {
    const CliRun r = run({"figure", "fig1", "--points", "10",
                          "--out", (temp_dir() / "floor.csv").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("grid_points") != std::string::npos);
}

TEST_CASE("verify passes with defaults and with c_scale = 2") {
    const CliRun r = run({"verify"});
    CHECK(r.code == 0);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
    CHECK(r.out.find("waist") != std::string::npos);

    const fs::path cfg = temp_dir() / "cscale.cfg";
    write_file(cfg, "c_scale = 2\n");
    const CliRun r2 = run({"verify", "--config", cfg.string()});
    CHECK(r2.code == 0);
    CHECK(r2.out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("fit subcommand recovers synthetic parameters and writes outputs") {
    const fs::path dir = temp_dir();
    FitModelParams m;
    m.zeta0 = 1.68;
    m.z_f = 7.15e-3;
    m.z = 500e-3;
    m.z_prime = 1465.3e-3;
    m.f = 200e-3;
    m.z0_minus = 1.2e-3;
    std::vector<double> grid;
    for (int i = -8; i <= 8; ++i)
        if (i != 0) grid.push_back(m.z_f + i * 0.5e-3);
    for (double mm : {-20.0, -10.0, 25.0, 60.0, 150.0}) grid.push_back(mm * 1e-3);
    const DataSet data = synthesize(m, grid, 0.0, 11);
    const fs::path csv = dir / "synthetic_fit.csv";
    {
        std::ofstream out(csv, std::ios::binary);
        write_dataset_csv(out, data);
    }
    const fs::path stem = dir / "fitout";
    const CliRun r = run({"fit", "--data", csv.string(), "--init-zeta0", "1.3", "--init-zf",
                          "5mm", "--out", stem.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("zeta0") != std::string::npos);
    const std::string result = slurp(fs::path(stem.string() + ".txt"));
    CHECK(result.find("converged=1") != std::string::npos);
    const auto z = result.find("zeta0_rad=");
    REQUIRE(z != std::string::npos);
    CHECK(std::stod(result.substr(z + 10)) == doctest::Approx(1.68).epsilon(1e-5));
    const std::string residuals = slurp(fs::path(stem.string() + "_residuals.csv"));
    CHECK(residuals.rfind("z0_plus_mm,", 0) == 0);
}

TEST_CASE("fit on an empty file is a parse error (exit 2)") {
    const fs::path csv = temp_dir() / "empty.csv";
    write_file(csv, "");
    const CliRun r = run({"fit", "--data", csv.string()});
    CHECK(r.code == 2);
}

TEST_CASE("fig5 output round-trips into the fit reader") {
    const fs::path dir = temp_dir();
    FitModelParams m;
    m.zeta0 = 1.68;
    m.z_f = 7.15e-3;
    m.z = 500e-3;
    m.z_prime = 1465.3e-3;
    m.f = 200e-3;
    m.z0_minus = 1.2e-3;
    std::vector<double> grid;
    for (double mm : {-20.0, -10.0, -2.0, 9.0, 12.0, 20.0, 40.0, 80.0}) grid.push_back(mm * 1e-3);
    const DataSet data = synthesize(m, grid, 0.02, 5);
    const fs::path csv = dir / "fig5_data.csv";
    {
        std::ofstream out(csv, std::ios::binary);
        write_dataset_csv(out, data);
    }
    const fs::path overlay = dir / "fig5.csv";
    REQUIRE(run({"figure", "fig5", "--data", csv.string(), "--out", overlay.string()}).code == 0);
    const DataSet back = read_dataset_csv_file(overlay.string());
    REQUIRE(back.rows.size() == data.rows.size());
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        CHECK(back.rows[i].z0p == doctest::Approx(data.rows[i].z0p).epsilon(1e-10));
        CHECK(back.rows[i].zeta == doctest::Approx(data.rows[i].zeta).epsilon(1e-10));
    }
}

TEST_CASE("physics subcommands print geometry") {
    const std::vector<std::string> base = {"--lambda", "702nm", "--lambda-p", "351.1nm",
                                           "--Lp", "7mm", "--omega", "3 sigma"};
    std::vector<std::string> gouy = {"gouy", "--z", "5mm"};
    gouy.insert(gouy.end(), base.begin(), base.end());
    const CliRun rg = run(gouy);
    CHECK(rg.code == 0);
    CHECK(rg.out.find("zeta") != std::string::npos);

    std::vector<std::string> ent = {"entangle"};
    ent.insert(ent.end(), base.begin(), base.end());
    const CliRun re = run(ent);
    CHECK(re.code == 0);
    CHECK(re.out.find("E_N") != std::string::npos);
    CHECK(re.out.find("1.0986") != std::string::npos);  // ln 3

    std::vector<std::string> lens = {"lens", "--zprime", "4mm", "--z", "7mm", "--f", "3mm"};
    lens.insert(lens.end(), base.begin(), base.end());
    const CliRun rl = run(lens);
    CHECK(rl.code == 0);
    CHECK(rl.out.find("B_plus") != std::string::npos);

    std::vector<std::string> waist = {"waist", "--z", "10mm", "--f", "8mm"};
    waist.insert(waist.end(), base.begin(), base.end());
    const CliRun rw = run(waist);
    CHECK(rw.code == 0);
    CHECK(rw.out.find("z0s_plus") != std::string::npos);
}
