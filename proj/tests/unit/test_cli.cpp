#include "cli/commands.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using smml::cli::run_cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) break;
        std::vector<std::string> row;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        if (!line.empty() && line.back() == ',') row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("smml_cli_test_" + name);
}

}  // namespace

TEST_CASE("solve prints the best solution first") {
    const auto r = run({"solve", "--n", "6", "--format", "text"});
    CHECK(r.code == 0);
    const auto first = r.out.find("#1");
    REQUIRE(first != std::string::npos);
    const auto block = r.out.substr(first, r.out.find("#2") - first);
    CHECK(block.find("0.1753120750") != std::string::npos);
    CHECK(block.find("-10.884034 -5.979677 -1.920263 1.920263 5.979677 10.884034") != std::string::npos);
    CHECK(block.find("local-minimum") != std::string::npos);
}

TEST_CASE("single cut-point sits at zero") {
    const auto r = run({"solve", "--n", "1", "--format", "text"});
    CHECK(r.code == 0);
    CHECK(r.out.find("solutions: 1") != std::string::npos);
    CHECK(r.out.find("cuts: 0.000000") != std::string::npos);
}

TEST_CASE("invalid parameters exit 1 naming the field") {
    auto r = run({"solve", "--model", "exponential-gamma", "--alpha", "1", "--beta", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--alpha") != std::string::npos);
    CHECK(r.err.find("alpha > 1") != std::string::npos);
    r = run({"solve", "--model", "exponential-gamma", "--beta", "-2"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--beta") != std::string::npos);
    r = run({"solve", "--model", "cauchy"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--model") != std::string::npos);
    r = run({"solve", "--format", "xml"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--format") != std::string::npos);
    CHECK(run({"solve", "--n", "0"}).code == 1);
    CHECK(run({"solve", "--no-such-flag"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"solve", "--out", "/nonexistent-dir/x.csv"}).code == 1);
}

TEST_CASE("sweep csv") {
    const auto r = run({"sweep", "--n-min", "1", "--n-max", "4"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0][0] == "n");
    CHECK(rows[0][1] == "I1_minus_I0_nats");
    CHECK(rows[0][2] == "b_1");
    CHECK(std::stod(rows[2][1]) == doctest::Approx(0.18485229622090686).epsilon(1e-11));
    CHECK(std::stod(rows[4][2]) == doctest::Approx(1.9202763355362).epsilon(1e-10));
    CHECK(std::stod(rows[1][2]) == 0.0);

    const auto full = parse_csv(run({"sweep", "--n-min", "4", "--n-max", "4", "--full-cuts"}).out);
    CHECK(full[0].size() == 6);
    CHECK(std::stod(full[1][2]) == doctest::Approx(-5.9799343096364).epsilon(1e-10));

    const auto bits = parse_csv(run({"sweep", "--n-max", "1", "--bits"}).out);
    CHECK(bits[0][1] == "I1_minus_I0_bits");
    CHECK(std::stod(bits[1][1]) == doctest::Approx(0.29687879342394176 / std::log(2.0)).epsilon(1e-12));

    const auto fixed = parse_csv(run({"sweep", "--n-max", "2", "--digits", "4"}).out);
    CHECK(fixed[2][2] == "1.9740");

    CHECK(run({"sweep", "--n-min", "3", "--n-max", "1"}).code == 1);
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
    const std::vector<std::string> args = {"sweep", "--model", "exponential-gamma", "--n-max", "4"};
    const auto a = run(args);
    const auto b = run(args);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == run(threaded).out);
}

TEST_CASE("config file with flag override") {
    const auto path = temp_path("config.toml");
    {
        std::ofstream f(path);
        f << "model = \"exponential-gamma\"\nalpha = 2\nbeta = 1\nn-max = 3\n";
    }
    const auto r = run({"--config", path.string(), "sweep", "--n-max", "2"});
    CHECK(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][2] == "a_1");
    CHECK(std::stod(rows[1][2]) == doctest::Approx(4.4921).epsilon(1e-4));
    std::filesystem::remove(path);
}

TEST_CASE("curves") {
    const auto out = temp_path("curves.csv");
    const auto cuts = temp_path("cuts.csv");
    const auto r = run({"curves", "--n", "6", "--x-lo", "-20", "--x-hi", "25", "--count", "2000", "--out",
                        out.string(), "--cuts-out", cuts.string()});
    REQUIRE(r.code == 0);
    std::ifstream f(out), c(cuts);
    std::stringstream fs, cs;
    fs << f.rdbuf();
    cs << c.rdbuf();
    const auto rows = parse_csv(fs.str());
    const auto cut_rows = parse_csv(cs.str());
    REQUIRE(rows.size() == 2001);
    REQUIRE(cut_rows.size() == 7);
    CHECK(rows[0] == std::vector<std::string>{"x", "D0", "D1", "r"});

    std::vector<double> a;
    for (std::size_t k = 1; k < cut_rows.size(); ++k) a.push_back(std::stod(cut_rows[k][1]));
    std::vector<double> x, d1, density;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        x.push_back(std::stod(rows[k][0]));
        d1.push_back(std::stod(rows[k][2]));
        density.push_back(std::stod(rows[k][3]));
    }
    double trapezoid = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) trapezoid += 0.5 * (x[k] - x[k - 1]) * (density[k] + density[k - 1]);

    // Jump of D1 at each cut: quadratic extrapolation of the three samples
    // on either side to the cut abscissa, which removes the smooth change.
    const auto extrapolate = [&](std::size_t i0, double at) {
        double s = 0.0;
        for (std::size_t i = i0; i < i0 + 3; ++i) {
            double w = 1.0;
            for (std::size_t j = i0; j < i0 + 3; ++j) {
                if (j != i) w *= (at - x[j]) / (x[i] - x[j]);
            }
            s += w * d1[i];
        }
        return s;
    };
    double worst_jump = 0.0;
    for (double cut : a) {
        const auto right = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), cut) - x.begin());
        REQUIRE(right >= 3);
        REQUIRE(right + 3 <= x.size());
        worst_jump = std::max(worst_jump, std::abs(extrapolate(right, cut) - extrapolate(right - 3, cut)));
    }
    CHECK(worst_jump <= 1e-5);
    // mass of N(0, 5) on (-20, 25)
    const double sd = std::sqrt(5.0);
    const double mass = 0.5 * (std::erfc(-25 / (sd * std::sqrt(2.0))) - std::erfc(20 / (sd * std::sqrt(2.0))));
    CHECK(trapezoid == doctest::Approx(mass).epsilon(1e-5));

    CHECK(run({"curves", "--count", "1"}).code == 1);
    CHECK(run({"curves", "--x-lo", "3", "--x-hi", "1"}).code == 1);
    std::filesystem::remove(out);
    std::filesystem::remove(cuts);
}

TEST_CASE("verify") {
    const auto r = run({"verify"});
    CHECK(r.code == 0);
    CHECK(r.out.find("== normal-normal") != std::string::npos);
    CHECK(r.out.find("== exponential-gamma") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);

    const auto strict = run({"verify", "--model", "normal-normal", "--tol", "1e-16"});
    CHECK(strict.code != 0);
    CHECK(strict.out.find("convergence              FAIL") != std::string::npos);
    CHECK(strict.out.find("== exponential-gamma") == std::string::npos);
}
