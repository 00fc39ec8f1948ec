#include "cli/verify.hpp"

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace smml::cli {

namespace {

double fd_step(double a) { return 1e-5 * std::max(1.0, std::abs(a)); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

// |x - y| <= rel |y| + abs_floor, reported as the worst ratio to the bound.
struct Agreement {
    double rel;
    double abs_floor;
    double worst = 0.0;
    void add(double x, double y) {
        worst = std::max(worst, std::abs(x - y) / (rel * std::abs(y) + abs_floor));
    }
    bool ok() const { return worst <= 1.0; }
};

std::vector<double> mirrored(const std::vector<double>& a) {
    std::vector<double> b(a.rbegin(), a.rend());
    for (double& x : b) x = -x;
    return b;
}

}  // namespace

std::vector<double> random_cutpoints(const Model& model, std::mt19937_64& rng) {
    const bool half_line = std::isfinite(model.marginal().support_lo);
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        std::vector<double> a(static_cast<std::size_t>(count(rng)));
        for (double& x : a) {
            const double u = unit(rng);
            x = half_line ? 0.05 * std::pow(1000.0, u) : -6.0 + 12.0 * u;
        }
        std::sort(a.begin(), a.end());
        bool spaced = true;
        for (std::size_t j = 1; j < a.size(); ++j) spaced = spaced && a[j] - a[j - 1] >= 0.05;
        if (spaced) return a;
    }
}

std::vector<double> fd_gradient_I1(const Model& model, const std::vector<double>& a) {
    std::vector<double> g(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double h = fd_step(a[j]);
        auto up = a, down = a;
        up[j] += h;
        down[j] -= h;
        const double f_up = message_length_I1(model, codebook_from_cutpoints(model, CutPointVector(up)));
        const double f_down =
            message_length_I1(model, codebook_from_cutpoints(model, CutPointVector(down)));
        g[j] = (f_up - f_down) / (2.0 * h);
    }
    return g;
}

std::vector<std::vector<double>> fd_jacobian_G(const Model& model, const std::vector<double>& a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> jac(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double h = fd_step(a[k]);
        auto up = a, down = a;
        up[k] += h;
        down[k] -= h;
        const auto g_up = gradient_G(model, codebook_from_cutpoints(model, CutPointVector(up)));
        const auto g_down = gradient_G(model, codebook_from_cutpoints(model, CutPointVector(down)));
        for (std::size_t j = 0; j < n; ++j) jac[j][k] = (g_up[j] - g_down[j]) / (2.0 * h);
    }
    return jac;
}

std::vector<CheckResult> run_checks(const Model& model, const VerifyOptions& opts) {
    std::vector<CheckResult> results;
    std::mt19937_64 rng(opts.solve.seed);
    std::vector<std::vector<double>> configs;
    for (std::size_t k = 0; k < opts.random_configs; ++k) configs.push_back(random_cutpoints(model, rng));

    Agreement grad{1e-4, 1e-12};
    Agreement jac{1e-4, 1e-7};
    double norm_err = 0.0;
    double gap_err = 0.0;
    bool centroids_inside = true;
    for (const auto& a : configs) {
        const auto book = codebook_from_cutpoints(model, CutPointVector(a));
        const auto G = gradient_G(model, book);
        const auto fd = fd_gradient_I1(model, a);
        for (std::size_t j = 0; j < a.size(); ++j) grad.add(fd[j], std::exp(book.log_r_at_cuts[j]) * G[j]);

        const auto J = jacobian_G(model, book);
        const auto fdj = fd_jacobian_G(model, a);
        for (std::size_t j = 0; j < a.size(); ++j) {
            for (std::size_t k = 0; k < a.size(); ++k) jac.add(fdj[j][k], J.at(j, k));
        }

        double total = 0.0;
        for (double lq : book.log_q) total += std::exp(lq);
        norm_err = std::max(norm_err, std::abs(total - 1.0));

        for (std::size_t i = 0; i < book.centroids.size(); ++i) {
            centroids_inside = centroids_inside && book.centroids[i] >= book.bounds[i] &&
                               book.centroids[i] <= book.bounds[i + 1];
        }
        try {
            const auto gaps = continuity_gaps(model, book);
            for (std::size_t j = 0; j < gaps.size(); ++j) {
                gap_err = std::max(gap_err, std::abs(gaps[j] - std::abs(G[j])) /
                                                std::max(1.0, std::abs(G[j])));
            }
        } catch (const std::logic_error&) {
            gap_err = std::numeric_limits<double>::infinity();
        }
    }
    const std::string cfgs = std::to_string(configs.size()) + " configs";
    results.push_back({"gradient-fd", grad.ok(), cfgs + ", worst error/bound " + sci(grad.worst)});
    results.push_back({"jacobian-fd", jac.ok(), cfgs + ", worst error/bound " + sci(jac.worst)});
    results.push_back({"normalization", norm_err <= 1e-12, "max |sum q - 1| = " + sci(norm_err)});
    results.push_back({"centroid-containment", centroids_inside, "centroid of U_i lies in U_i"});
    results.push_back({"continuity-vs-G", gap_err <= 1e-12, "max |gap - |G|| = " + sci(gap_err)});

    const auto sweep = sweep_solve(model, 1, opts.n_max, opts.solve);
    std::size_t solved = 0;
    double worst_grad = 0.0;
    double worst_cont = 0.0;
    double worst_rise = -std::numeric_limits<double>::infinity();
    double worst_mirror = 0.0;
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        if (sweep[k].solutions.empty()) continue;
        ++solved;
        const auto& best = sweep[k].solutions.front();
        worst_grad = std::max(worst_grad, best.final_grad_norm);
        for (double g : best.continuity_gaps) worst_cont = std::max(worst_cont, g);
        if (k > 0 && !sweep[k - 1].solutions.empty()) {
            worst_rise = std::max(worst_rise, best.I1 - sweep[k - 1].solutions.front().I1);
        }
        if (opts.symmetric) {
            const auto flip = mirrored(best.codebook.cuts.values());
            const double I1 =
                message_length_I1(model, codebook_from_cutpoints(model, CutPointVector(flip)));
            worst_mirror = std::max(worst_mirror, std::abs(I1 - best.I1));
        }
    }
    const std::string range = "n=1.." + std::to_string(opts.n_max);
    results.push_back({"convergence", solved == sweep.size(),
                       range + ": " + std::to_string(solved) + "/" + std::to_string(sweep.size()) +
                           " solved, max|G| = " + sci(worst_grad)});
    results.push_back({"continuity-at-solution", solved > 0 && worst_cont <= 1e-10,
                       "max gap = " + sci(worst_cont)});
    results.push_back({"monotone-in-n", solved == sweep.size() && worst_rise <= 1e-10,
                       "max I1(n) - I1(n-1) = " +
                           (sweep.size() > 1 ? sci(worst_rise) : std::string("n/a"))});
    if (opts.symmetric) {
        results.push_back({"mirror-symmetry", solved > 0 && worst_mirror <= 1e-12,
                           "max |I1(-a) - I1(a)| = " + sci(worst_mirror)});
    }
    return results;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    std::vector<std::string> models;
    if (c.model_given) models.push_back(c.model);
    else models = {"normal-normal", "exponential-gamma"};

    for (const auto& name : models) {
        RunConfig mc = c;
        mc.model = name;
        if (auto problem = validate_model(mc)) {
            err << "error: " << problem->field << ": " << problem->message << "\n";
            return static_cast<int>(ExitCode::InvalidInput);
        }
    }

    bool all = true;
    for (const auto& name : models) {
        RunConfig mc = c;
        mc.model = name;
        VerifyOptions vo;
        vo.n_max = c.n_max;
        vo.symmetric = name == "normal-normal";
        vo.solve = solve_options(mc);
        const auto results = run_checks(build_model(mc), vo);

        out << "== " << name << " (alpha=" << format_number(mc.alpha, std::nullopt);
        if (name == "exponential-gamma") out << ", beta=" << format_number(mc.beta, std::nullopt);
        out << ") ==\n";
        for (const auto& r : results) {
            char line[256];
            std::snprintf(line, sizeof line, "%-24s %-4s  %s\n", r.name.c_str(),
                          r.passed ? "PASS" : "FAIL", r.detail.c_str());
            out << line;
            all = all && r.passed;
        }
        out << "\n";
    }
    out << (all ? "all checks passed" : "some checks FAILED") << "\n";
    return static_cast<int>(all ? ExitCode::Success : ExitCode::SolverFailure);
}

}  // namespace smml::cli
