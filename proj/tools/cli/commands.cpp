#include "cli/commands.hpp"

#include "smml/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace smml::cli {

namespace {

constexpr int code(ExitCode c) { return static_cast<int>(c); }

int invalid(std::ostream& err, const std::string& field, const std::string& message) {
    err << "error: " << field << ": " << message << "\n";
    return code(ExitCode::InvalidInput);
}

// Output goes to --out when given, else to the caller's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::out | std::ios::trunc);
            if (file_) stream_ = &file_;
            else failed_ = true;
        }
    }
    bool failed() const { return failed_; }
    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
    bool failed_ = false;
};

bool symmetric(const RunConfig& c) { return c.model == "normal-normal"; }

double units(const RunConfig& c) { return c.bits ? std::numbers::ln2 : 1.0; }

std::string unit_name(const RunConfig& c) { return c.bits ? "bits" : "nats"; }

std::string fixed(double v, int decimals) {
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double max_gap(const SolveReport& r) {
    double m = 0.0;
    for (double g : r.continuity_gaps) m = std::max(m, g);
    return m;
}

std::string model_label(const RunConfig& c) {
    std::ostringstream s;
    s << c.model << " (alpha=" << format_number(c.alpha, std::nullopt);
    if (c.model == "exponential-gamma") s << ", beta=" << format_number(c.beta, std::nullopt);
    s << ")";
    return s.str();
}

std::optional<int> check_model(const RunConfig& c, std::ostream& err) {
    if (auto problem = validate_model(c)) return invalid(err, problem->field, problem->message);
    return std::nullopt;
}

}  // namespace

std::string format_number(double value, std::optional<int> digits) {
    if (digits) return fixed(value, *digits);
    if (value == 0.0) value = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<double> table_cutpoints(const SolveReport& report, bool symmetric_model, bool full) {
    std::vector<double> a = report.codebook.cuts.values();
    if (!symmetric_model || full) return a;
    const auto negatives = std::count_if(a.begin(), a.end(), [](double x) { return x < -1e-9; });
    const auto positives = std::count_if(a.begin(), a.end(), [](double x) { return x > 1e-9; });
    if (negatives > positives) {
        std::reverse(a.begin(), a.end());
        for (double& x : a) x = -x;
    }
    std::vector<double> b;
    for (double x : a) {
        if (x >= -1e-9) b.push_back(std::abs(x) <= 1e-9 ? 0.0 : x);
    }
    return b;
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (auto rc = check_model(c, err)) return *rc;
    if (c.n < 1) return invalid(err, "--n", "at least one cut-point is required");
    Sink sink(c.out, out);
    if (sink.failed()) return invalid(err, "--out", "cannot open '" + c.out + "' for writing");
    auto& os = sink.stream();

    const Model model = build_model(c);
    const auto sols = multi_start_solve(model, c.n, solve_options(c));
    const double u = units(c);

    if (c.format == OutputFormat::Csv) {
        os << "rank,I1_minus_I0_" << unit_name(c) << ",I1_" << unit_name(c) << ",I0_"
           << unit_name(c) << ",classification,iterations,grad_norm,max_continuity_gap";
        for (std::size_t j = 1; j <= c.n; ++j) os << ",a_" << j;
        os << "\n";
        for (std::size_t k = 0; k < sols.size(); ++k) {
            const auto& s = sols[k];
            os << k + 1 << "," << format_number(s.gap / u, c.digits) << ","
               << format_number(s.I1 / u, c.digits) << "," << format_number(s.I0 / u, c.digits)
               << "," << to_string(s.classification) << "," << s.iterations << ","
               << format_number(s.final_grad_norm, std::nullopt) << ","
               << format_number(max_gap(s), std::nullopt);
            for (double a : s.codebook.cuts.values()) os << "," << format_number(a, c.digits);
            os << "\n";
        }
    } else {
        os << "model: " << model_label(c) << "\n";
        os << "cut-points: " << c.n << "\n";
        os << "I0 = " << fixed(model.marginal_entropy() / u, 10) << " " << unit_name(c) << "\n";
        os << "solutions: " << sols.size() << "\n";
        for (std::size_t k = 0; k < sols.size(); ++k) {
            const auto& s = sols[k];
            os << "\n#" << k + 1 << "  I1-I0 = " << fixed(s.gap / u, c.digits.value_or(10)) << " "
               << unit_name(c) << "  [" << to_string(s.classification)
               << "]  max continuity gap = " << sci(max_gap(s)) << "\n  cuts:";
            for (double a : s.codebook.cuts.values()) os << " " << fixed(a, c.digits.value_or(6));
            os << "\n";
        }
    }
    if (sols.empty()) {
        err << "error: no start converged to a local minimum\n";
        return code(ExitCode::SolverFailure);
    }
    return code(ExitCode::Success);
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (auto rc = check_model(c, err)) return *rc;
    if (c.n_min < 1) return invalid(err, "--n-min", "must be at least 1");
    if (c.n_min > c.n_max) {
        return invalid(err, "--n-max", "empty n-range " + std::to_string(c.n_min) + ".." +
                                           std::to_string(c.n_max));
    }
    Sink sink(c.out, out);
    if (sink.failed()) return invalid(err, "--out", "cannot open '" + c.out + "' for writing");
    auto& os = sink.stream();

    const Model model = build_model(c);
    const auto entries = sweep_solve(model, c.n_min, c.n_max, solve_options(c));
    const double u = units(c);
    const bool sym = symmetric(c);

    std::vector<std::vector<double>> rows(entries.size());
    std::size_t width = 0;
    bool all_solved = true;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].solutions.empty()) {
            all_solved = false;
            continue;
        }
        rows[k] = table_cutpoints(entries[k].solutions.front(), sym, c.full_cuts);
        width = std::max(width, rows[k].size());
    }
    const std::string prefix = sym && !c.full_cuts ? "b_" : "a_";

    if (c.format == OutputFormat::Csv) {
        os << "n,I1_minus_I0_" << unit_name(c);
        for (std::size_t j = 1; j <= width; ++j) os << "," << prefix << j;
        os << "\n";
        for (std::size_t k = 0; k < entries.size(); ++k) {
            os << entries[k].n << ",";
            if (!entries[k].solutions.empty()) {
                os << format_number(entries[k].solutions.front().gap / u, c.digits);
            }
            for (std::size_t j = 0; j < width; ++j) {
                os << ",";
                if (j < rows[k].size()) os << format_number(rows[k][j], c.digits);
            }
            os << "\n";
        }
    } else {
        os << "model: " << model_label(c) << "\n";
        os << "  n  I1-I0 (" << unit_name(c) << ")  cut-points\n";
        for (std::size_t k = 0; k < entries.size(); ++k) {
            char nbuf[16];
            std::snprintf(nbuf, sizeof nbuf, "%3zu", entries[k].n);
            os << nbuf << "  ";
            if (entries[k].solutions.empty()) {
                os << "(no solution)\n";
                continue;
            }
            os << fixed(entries[k].solutions.front().gap / u, c.digits.value_or(10));
            const int decimals = c.digits.value_or(sym ? 4 : 2);
            for (double b : rows[k]) os << "  " << fixed(b, decimals);
            os << "\n";
        }
    }
    if (!all_solved) {
        err << "error: no converged local minimum for at least one n\n";
        return code(ExitCode::SolverFailure);
    }
    return code(ExitCode::Success);
}

int cmd_curves(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (auto rc = check_model(c, err)) return *rc;
    if (c.n < 1) return invalid(err, "--n", "at least one cut-point is required");
    if (c.count < 2) return invalid(err, "--count", "need at least 2 samples");
    if (!(c.x_lo < c.x_hi)) return invalid(err, "--x-lo", "x-lo must be below x-hi");

    std::string cuts_path = c.cuts_out;
    if (cuts_path.empty() && !c.out.empty()) {
        std::filesystem::path p(c.out);
        cuts_path = (p.parent_path() / (p.stem().string() + "_cuts.csv")).string();
    }
    Sink sink(c.out, out);
    if (sink.failed()) return invalid(err, "--out", "cannot open '" + c.out + "' for writing");

    const Model model = build_model(c);
    const auto sols = multi_start_solve(model, c.n, solve_options(c));
    if (sols.empty()) {
        err << "error: no start converged to a local minimum\n";
        return code(ExitCode::SolverFailure);
    }
    const auto& best = sols.front();
    const double u = units(c);

    auto& os = sink.stream();
    os << "x,D0,D1,r\n";
    for (const auto& s : curve_samples(model, best.codebook, c.x_lo, c.x_hi, c.count)) {
        os << format_number(s.x, c.digits) << "," << format_number(s.d0 / u, c.digits) << ","
           << format_number(s.d1 / u, c.digits) << "," << format_number(s.r, c.digits) << "\n";
    }

    const auto write_cuts = [&](std::ostream& cs) {
        cs << "index,cut\n";
        const auto& a = best.codebook.cuts.values();
        for (std::size_t j = 0; j < a.size(); ++j) {
            cs << j + 1 << "," << format_number(a[j], c.digits) << "\n";
        }
    };
    if (cuts_path.empty()) {
        os << "\n";
        write_cuts(os);
    } else {
        std::ofstream cs(cuts_path, std::ios::out | std::ios::trunc);
        if (!cs) return invalid(err, "--cuts-out", "cannot open '" + cuts_path + "' for writing");
        write_cuts(cs);
    }
    return code(ExitCode::Success);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strict minimum message length estimators for 1-D exponential families", "smml"};
    app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig c;
    std::string format = "csv";
    auto* model_opt = app.add_option("--model", c.model, "normal-normal | exponential-gamma");
    app.add_option("--alpha", c.alpha, "Prior parameter alpha");
    app.add_option("--beta", c.beta, "Prior rate beta (exponential-gamma)");
    app.add_option("--n", c.n, "Number of cut-points");
    app.add_option("--n-min", c.n_min, "Sweep: smallest n");
    app.add_option("--n-max", c.n_max, "Sweep: largest n");
    app.add_option("--tol", c.tolerance, "Newton tolerance on max|G|");
    app.add_option("--max-iter", c.max_iter, "Newton iteration limit");
    app.add_option("--extra-starts", c.extra_starts, "Randomized starts per n");
    app.add_option("--seed", c.seed, "Seed for randomized starts");
    app.add_option("--threads", c.threads, "Worker threads for multi-start");
    app.add_option("--out", c.out, "Output file (default stdout)");
    app.add_option("--format", format, "csv | text");
    app.add_flag("--bits", c.bits, "Report message lengths in bits instead of nats");
    app.add_flag("--full-cuts", c.full_cuts, "Print full cut-point vectors for symmetric models");
    app.add_option("--digits", c.digits, "Fixed decimals instead of round-trip precision");
    app.add_option("--x-lo", c.x_lo, "Curves: left end of the sampled range");
    app.add_option("--x-hi", c.x_hi, "Curves: right end of the sampled range");
    app.add_option("--count", c.count, "Curves: number of samples");
    app.add_option("--cuts-out", c.cuts_out, "Curves: cut-point CSV path");

    auto* solve = app.add_subcommand("solve", "Solve for one n and list all local minima");
    auto* sweep = app.add_subcommand("sweep", "Best solution for each n in a range, as CSV");
    auto* curves = app.add_subcommand("curves", "Sample D0, D1 and r for the best solution");
    auto* verify = app.add_subcommand("verify", "Run the invariant checks");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return code(ExitCode::Success);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return code(ExitCode::InvalidInput);
    }
    c.model_given = model_opt->count() > 0;

    if (format == "csv") c.format = OutputFormat::Csv;
    else if (format == "text") c.format = OutputFormat::Text;
    else return invalid(err, "--format", "expected csv or text, got '" + format + "'");
    if (c.digits && (*c.digits < 0 || *c.digits > 17)) {
        return invalid(err, "--digits", "must be between 0 and 17");
    }
    if (!(c.tolerance > 0.0)) return invalid(err, "--tol", "must be positive");

    try {
        if (*solve) return cmd_solve(c, out, err);
        if (*sweep) return cmd_sweep(c, out, err);
        if (*curves) return cmd_curves(c, out, err);
        if (*verify) return cmd_verify(c, out, err);
    } catch (const ParameterError& e) {
        return invalid(err, "--alpha/--beta", e.what());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return code(ExitCode::SolverFailure);
    }
    return code(ExitCode::InvalidInput);
}

}  // namespace smml::cli
