#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <ringdelta/cli.hpp>

using namespace ringdelta;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct Csv {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    double num(std::size_t row, const std::string& col) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == col) return std::stod(rows.at(row).at(i));
        throw std::out_of_range(col);
    }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

Csv parse_csv(const std::string& text) {
    Csv c;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto pos = line.find(": ");
            c.meta[line.substr(2, pos - 2)] = pos + 2 <= line.size() ? line.substr(pos + 2) : "";
        } else if (c.columns.empty()) {
            c.columns = split(line, ',');
        } else {
            c.rows.push_back(split(line, ','));
        }
    }
    return c;
}

}  // namespace

TEST(Solve, BoundRowOnly) {
    const auto r = run_cli({"solve", "--kappa", "1", "--n-max", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto c = parse_csv(r.out);
    EXPECT_EQ(c.columns, (std::vector<std::string>{"branch", "d_exact", "d_approx", "eps", "E_physical", "residual"}));
    ASSERT_EQ(c.rows.size(), 1u);
    EXPECT_EQ(c.rows[0][0], "0");
    EXPECT_NEAR(c.num(0, "d_exact"), 0.53575, 5e-6);
    EXPECT_DOUBLE_EQ(c.num(0, "d_approx"), 0.5);
}

TEST(Solve, HugeKappaIsGraceful) {
    const auto r = run_cli({"solve", "--kappa", "1e300", "--n-max", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto c = parse_csv(r.out);
    ASSERT_EQ(c.rows.size(), 3u);
    EXPECT_DOUBLE_EQ(c.num(0, "d_exact"), 5e299);
    EXPECT_EQ(c.rows[0][3], "-inf");  // -d^2 overflows, reported rather than crashing
    EXPECT_LE(c.num(1, "residual"), 1e-10);
}

TEST(Solve, PaperCompatUnboundTable) {
    const auto r = run_cli({"solve", "--kappa", "1.2732395", "--convention", "paper-compat", "--n-max", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto c = parse_csv(r.out);
    ASSERT_EQ(c.rows.size(), 6u);
    const double d[] = {0.34278, 1.15979, 2.09395, 3.06518, 4.04963};
    const double E[] = {0.05875, 0.67256, 2.19231, 4.69766, 8.19976};
    for (int n = 1; n <= 5; ++n) {
        EXPECT_NEAR(c.num(n, "d_exact"), d[n - 1], 5e-6);
        EXPECT_NEAR(c.num(n, "E_physical"), E[n - 1], 5e-5);  // hartree at R0 = 1
    }
    EXPECT_EQ(c.meta.at("convention"), "paper-compat");
}

TEST(Solve, EnergyFlags) {
    const auto red = parse_csv(run_cli({"solve", "--kappa", "2", "--n-max", "1", "--energy", "reduced"}).out);
    EXPECT_DOUBLE_EQ(red.num(0, "E_physical"), red.num(0, "eps"));
    const auto har = parse_csv(run_cli({"solve", "--q", "1", "--R0", "1", "--n-max", "1"}).out);
    EXPECT_NEAR(har.num(0, "E_physical"), -0.5037, 5e-5);
    const auto pc = parse_csv(run_cli({"solve", "--q", "1", "--R0", "1", "--n-max", "1", "--energy", "paper-compat"}).out);
    EXPECT_NEAR(pc.num(0, "E_physical"), -1.0073268218286443 / (2 * pi * pi), 1e-14);
    EXPECT_DOUBLE_EQ(pc.num(1, "E_physical"), har.num(1, "E_physical"));
}

TEST(Solve, EnergyCeiling) {
    const auto c = parse_csv(run_cli({"solve", "--kappa", "2", "--eps-max", "5"}).out);
    ASSERT_EQ(c.rows.size(), 3u);  // bound, 0.48, 3.39
    for (std::size_t i = 0; i < c.rows.size(); ++i) EXPECT_LE(c.num(i, "eps"), 5.0);
}

TEST(Solve, QAndR0Reduction) {
    const auto c = parse_csv(run_cli({"solve", "--q", "3", "--R0", "2", "--n-max", "0"}).out);
    EXPECT_EQ(c.meta.at("kappa"), "24");
    EXPECT_NEAR(c.num(0, "d_exact"), solve_bound(24.0).d, 1e-15);
}

TEST(Usage, ValidationErrorsExitTwo) {
    EXPECT_EQ(run_cli({"solve"}).code, 2);
    EXPECT_EQ(run_cli({"solve", "--kappa", "1", "--q", "1"}).code, 2);
    EXPECT_EQ(run_cli({"solve", "--kappa", "0"}).code, 2);
    EXPECT_EQ(run_cli({"solve", "--kappa", "-3"}).code, 2);
    EXPECT_EQ(run_cli({"solve", "--q", "-1"}).code, 2);
    EXPECT_EQ(run_cli({"solve", "--kappa", "1", "--format", "xml"}).code, 2);
    EXPECT_EQ(run_cli({"solve", "--kappa", "1", "--format", "text"}).code, 2);
    EXPECT_EQ(run_cli({"solve", "--kappa", "1", "--convention", "plus"}).code, 2);
    EXPECT_EQ(run_cli({"wavefunction", "--kappa", "1", "--samples", "1"}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({}).code, 2);
    const auto r = run_cli({"solve", "--kappa", "0"});
    EXPECT_NE(r.err.find("kappa must be positive"), std::string::npos);
    EXPECT_TRUE(r.out.empty());
}

TEST(Formats, JsonMirrorsCsv) {
    const auto csv = parse_csv(run_cli({"solve", "--kappa", "2", "--n-max", "3"}).out);
    const auto js = nlohmann::json::parse(run_cli({"solve", "--kappa", "2", "--n-max", "3", "--format", "json"}).out);
    EXPECT_EQ(js["command"], "solve");
    ASSERT_EQ(js["columns"].size(), csv.columns.size());
    for (std::size_t i = 0; i < csv.columns.size(); ++i) EXPECT_EQ(js["columns"][i], csv.columns[i]);
    ASSERT_EQ(js["rows"].size(), csv.rows.size());
    for (std::size_t r = 0; r < csv.rows.size(); ++r)
        for (const auto& col : csv.columns) EXPECT_EQ(js["rows"][r][col].get<double>(), csv.num(r, col)) << col;
    for (const auto& [k, v] : csv.meta) EXPECT_EQ(js["meta"][k], v);
}

TEST(Formats, SeventeenDigitsAndLocaleFree) {
    EXPECT_EQ(cli::format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(cli::format_number(2.0), "2");
    EXPECT_EQ(cli::format_number(-INFINITY), "-inf");
    EXPECT_EQ(cli::format_number(1e-300), "1e-300");
}

TEST(Formats, DeterministicAndFileOutput) {
    const std::vector<std::string> args{"wavefunction", "--kappa", "2", "--samples", "50"};
    const auto a = run_cli(args), b = run_cli(args);
    EXPECT_EQ(a.out, b.out);
    const auto path = std::filesystem::temp_directory_path() / "ringdelta_cli_test.csv";
    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", path.string()});
    const auto c = run_cli(with_out);
    ASSERT_EQ(c.code, 0);
    EXPECT_TRUE(c.out.empty());
    std::ifstream f(path, std::ios::binary);
    const std::string file((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    EXPECT_EQ(file, a.out);
    std::filesystem::remove(path);
    EXPECT_EQ(run_cli({"solve", "--kappa", "1", "--out", "/nonexistent/dir/x.csv"}).code, 2);
}

TEST(Wavefunction, BoundIsSymmetricAboutPi) {
    const auto c = parse_csv(run_cli({"wavefunction", "--kappa", "2", "--samples", "8"}).out);
    ASSERT_EQ(c.rows.size(), 8u);
    EXPECT_EQ(c.columns, (std::vector<std::string>{"theta", "psi", "x", "y"}));
    for (int i = 1; i < 8; ++i) EXPECT_NEAR(c.num(i, "psi"), c.num(8 - i, "psi"), 1e-15);
    EXPECT_DOUBLE_EQ(c.num(0, "x"), 1.0);
    EXPECT_NEAR(c.num(2, "y"), 1.0, 1e-15);
}

TEST(Wavefunction, SelectorsAndPeak) {
    const auto s = parse_csv(run_cli({"wavefunction", "--kappa", "2", "--state", "sin", "--n", "1", "--samples", "16"}).out);
    EXPECT_NEAR(s.num(0, "psi"), 0.0, 1e-15);
    EXPECT_EQ(s.meta.at("state"), "sin1");

    const auto b = parse_csv(run_cli({"wavefunction", "--kappa", "1", "--samples", "64", "--R0", "2"}).out);
    EXPECT_NEAR(b.num(0, "psi"), 0.24511921996865484 * std::cosh(pi * 0.53575343313399018), 1e-14);
    for (std::size_t i = 1; i < b.rows.size(); ++i) EXPECT_LT(b.num(i, "psi"), b.num(0, "psi"));
    EXPECT_DOUBLE_EQ(b.num(0, "x"), 2.0);

    const auto c = parse_csv(run_cli({"wavefunction", "--kappa", "2", "--state", "cos", "--n", "3"}).out);
    EXPECT_EQ(c.rows.size(), 360u);
    EXPECT_EQ(run_cli({"wavefunction", "--kappa", "2", "--state", "tan"}).code, 2);
    EXPECT_EQ(run_cli({"wavefunction", "--kappa", "2", "--state", "cos", "--n", "0"}).code, 2);
}

TEST(Charplot, IntersectionsMatchSolve) {
    const auto r = run_cli({"charplot", "--kappa", "2", "--d-min", "0", "--d-max", "4", "--samples", "4001"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto c = parse_csv(r.out);
    EXPECT_EQ(c.meta.at("poles"), "0,1,2,3,4");
    const double step = 4.0 / 4000;

    // Sign changes of cot - line away from poles.
    auto crossings = [&](const std::string& line) {
        std::vector<double> xs;
        for (std::size_t i = 1; i < c.rows.size(); ++i) {
            const double d0 = c.num(i - 1, "d"), d1 = c.num(i, "d");
            if (std::floor(d0) != std::floor(d1) || d0 == std::floor(d0)) continue;  // a pole lies in between
            const double f0 = c.num(i - 1, "cot") - c.num(i - 1, line);
            const double f1 = c.num(i, "cot") - c.num(i, line);
            if (std::signbit(f0) != std::signbit(f1)) xs.push_back(0.5 * (d0 + d1));
        }
        return xs;
    };
    const auto derived = crossings("line_derived");
    const auto paper = crossings("line_paper_compat");
    ASSERT_EQ(derived.size(), 4u);
    ASSERT_EQ(paper.size(), 4u);
    const auto solved = parse_csv(run_cli({"solve", "--kappa", "2", "--n-max", "4"}).out);
    for (int n = 1; n <= 4; ++n) {
        EXPECT_NEAR(derived[n - 1], solved.num(n, "d_exact"), step);
        EXPECT_NEAR(paper[n - 1], solve_unbound(2.0, n, SignConvention::PaperCompat).d, step);
    }
    // Bound root: coth crosses +(2/kappa) d.
    int bound_crossings = 0;
    for (std::size_t i = 2; i < c.rows.size(); ++i) {
        const double f0 = c.num(i - 1, "coth") - c.num(i - 1, "line_paper_compat");
        const double f1 = c.num(i, "coth") - c.num(i, "line_paper_compat");
        if (std::signbit(f0) != std::signbit(f1)) {
            ++bound_crossings;
            EXPECT_NEAR(c.num(i, "d"), solved.num(0, "d_exact"), step);
        }
    }
    EXPECT_EQ(bound_crossings, 1);
    EXPECT_NEAR(c.num(c.rows.size() - 1, "coth"), 1.0, 1e-10);
}

TEST(Charplot, RangeWithoutPoles) {
    const auto c = parse_csv(run_cli({"charplot", "--kappa", "2", "--d-min", "0.1", "--d-max", "0.9", "--samples", "5"}).out);
    EXPECT_EQ(c.meta.at("poles"), "");
    EXPECT_EQ(c.rows.size(), 5u);
    EXPECT_EQ(run_cli({"charplot", "--kappa", "2", "--d-min", "3", "--d-max", "1"}).code, 2);
}

TEST(Verify, ExitCodes) {
    const auto ok = run_cli({"verify", "--kappa", "2"});
    EXPECT_EQ(ok.code, 0) << ok.out;
    EXPECT_NE(ok.out.find("overall: pass"), std::string::npos);

    const auto bad = run_cli({"verify", "--kappa", "2", "--convention", "paper-compat"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("spectrum.cos1.extrapolated: FAIL"), std::string::npos);

    EXPECT_EQ(run_cli({"verify", "--kappa", "0"}).code, 2);
}

TEST(Verify, TabularReport) {
    const auto r = run_cli({"verify", "--kappa", "2", "--count", "3", "--m-min", "100", "--m-levels", "3", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    const auto c = parse_csv(r.out);
    EXPECT_EQ(c.columns, (std::vector<std::string>{"check", "value", "tolerance", "pass"}));
    EXPECT_EQ(c.meta.at("overall"), "pass");
    const auto js = nlohmann::json::parse(
        run_cli({"verify", "--kappa", "2", "--count", "3", "--m-min", "100", "--m-levels", "3", "--format", "json"}).out);
    EXPECT_EQ(js["rows"].size(), c.rows.size());
}

TEST(SmoothRadius, Values) {
    const auto c = parse_csv(run_cli({"smooth-radius", "--q", "1"}).out);
    EXPECT_NEAR(c.num(0, "R0"), 0.677183, 1e-6);
    EXPECT_NEAR(c.num(0, "d"), 0.5, 1e-12);
    const auto pc = parse_csv(run_cli({"smooth-radius", "--q", "1", "--energy", "paper-compat"}).out);
    EXPECT_NEAR(pc.num(0, "energy"), -0.01267, 1e-5);
    const auto big = parse_csv(run_cli({"smooth-radius", "--q", "100"}).out);
    EXPECT_NEAR(big.num(0, "R0"), 0.0677183, 1e-7);
    EXPECT_EQ(run_cli({"smooth-radius", "--q", "0"}).code, 2);
    EXPECT_EQ(run_cli({"smooth-radius"}).code, 2);
}

TEST(Binary, ExitCodesThroughProcess) {
    const std::string exe = RINGDELTA_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int s = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(s);
    };
    EXPECT_EQ(status("solve --kappa 1"), 0);
    EXPECT_EQ(status("solve --kappa 0"), 2);
    EXPECT_EQ(status("verify --kappa 2 --convention paper-compat --count 3"), 1);
    EXPECT_EQ(status("--help"), 0);
}
