#include "smml/solver.hpp"

#include "smml/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <random>
#include <thread>

namespace smml {

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::LocalMinimum: return "local-minimum";
        case Classification::SaddleOrIndefinite: return "saddle/indefinite";
        case Classification::NotCritical: return "not-critical";
    }
    return "unknown";
}

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

struct Evaluation {
    CodeBook book;
    std::vector<double> g;
    double norm = 0.0;
};

std::optional<Evaluation> evaluate(const Model& model, std::vector<double> points) {
    const auto& family = model.family();
    if (!CutPointVector::admissible(points, family.support_lo, family.support_hi)) {
        return std::nullopt;
    }
    try {
        Evaluation e;
        e.book = codebook_from_cutpoints(model, CutPointVector(std::move(points)));
        e.g = gradient_G(model, e.book);
        e.norm = max_abs(e.g);
        if (!std::isfinite(e.norm)) return std::nullopt;
        return e;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

}  // namespace

SolveReport newton_solve(const Model& model, const CutPointVector& initial,
                         const SolveOptions& opts) {
    if (initial.size() == 0) throw ArgumentError("at least one cut-point is required");
    SolveReport report;
    Evaluation current{codebook_from_cutpoints(model, initial), {}, 0.0};
    current.g = gradient_G(model, current.book);
    current.norm = max_abs(current.g);
    report.trace.push_back({0, current.norm, 0.0});

    const std::size_t n = initial.size();
    std::size_t iter = 0;
    while (true) {
        if (current.norm <= opts.tolerance) {
            report.converged = true;
            break;
        }
        if (iter >= opts.max_iterations) {
            report.diagnostic = "iteration limit reached";
            break;
        }
        ++iter;

        const Tridiagonal jac = jacobian_G(model, current.book);
        std::vector<double> rhs(n);
        for (std::size_t j = 0; j < n; ++j) rhs[j] = -current.g[j];
        const auto step = solve_tridiagonal(jac, rhs);
        if (!step) {
            report.diagnostic = "singular Jacobian at iteration " + std::to_string(iter);
            break;
        }

        double scale = 1.0;
        std::optional<Evaluation> accepted;
        for (std::size_t k = 0; k <= opts.max_backtracks; ++k, scale *= 0.5) {
            std::vector<double> cand(n);
            for (std::size_t j = 0; j < n; ++j) cand[j] = current.book.cuts[j] + scale * (*step)[j];
            auto e = evaluate(model, std::move(cand));
            if (e && e->norm < current.norm) {
                accepted = std::move(e);
                break;
            }
        }
        if (!accepted) {
            report.diagnostic = "line search could not reduce max|G| at iteration " +
                                std::to_string(iter);
            break;
        }
        current = std::move(*accepted);
        report.trace.push_back({iter, current.norm, scale});
    }

    report.iterations = iter;
    report.final_grad_norm = current.norm;
    report.I1 = message_length_I1(model, current.book);
    report.I0 = model.marginal_entropy();
    report.gap = report.I1 - report.I0;
    report.classification =
        classify_critical_point(model, current.book, current.norm, opts.critical_threshold);
    report.continuity_gaps = continuity_gaps(model, current.book);
    report.codebook = std::move(current.book);
    return report;
}

Classification classify_critical_point(const Model& model, const CodeBook& codebook,
                                       double grad_norm, double threshold) {
    if (!(grad_norm <= threshold)) return Classification::NotCritical;
    const Tridiagonal jac = jacobian_G(model, codebook);
    const std::size_t n = jac.size();
    std::vector<double> diag(n), off(n ? n - 1 : 0);
    for (std::size_t j = 0; j < n; ++j) diag[j] = jac.diag(j);
    // S = D^{1/2} J D^{-1/2} has S_{k,k+1} = S_{k+1,k} and
    // S_{k,k+1}^2 = J_{k,k+1} J_{k+1,k}; only the square enters the inertia.
    for (std::size_t k = 0; k + 1 < n; ++k) {
        off[k] = std::sqrt(std::max(0.0, jac.upper(k) * jac.lower(k)));
    }
    const auto inertia = symmetric_tridiagonal_inertia(diag, off);
    return inertia.positive == n ? Classification::LocalMinimum
                                 : Classification::SaddleOrIndefinite;
}

std::vector<double> quantile_start(const Model& model, std::size_t n) {
    if (n == 0) throw ArgumentError("n must be at least 1");
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = model.marginal().quantile(static_cast<double>(i + 1) / static_cast<double>(n + 1));
    }
    return a;
}

namespace {

std::vector<double> perturbed_start(const Model& model, std::size_t n, std::uint64_t seed,
                                    std::size_t index, double amount) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(n)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double base = static_cast<double>(i + 1) / static_cast<double>(n + 1);
        const double factor = 1.0 + amount * unit(rng);
        // Scale the nearer tail probability so p stays inside (0, 1).
        p[i] = base <= 0.5 ? base * factor : 1.0 - (1.0 - base) * factor;
    }
    std::sort(p.begin(), p.end());
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = model.marginal().quantile(p[i]);
    return a;
}

bool same_solution(std::span<const double> a, std::span<const double> b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol * std::max(1.0, std::abs(a[i]))) return false;
    }
    return true;
}

double min_log_q(const SolveReport& r) {
    const auto& lq = r.codebook.log_q;
    return *std::min_element(lq.begin(), lq.end());
}

// Orders by I1. Solutions whose I1 agree to within tie_tolerance of the
// best member of their group cannot be told apart in double precision; these
// prefer the configuration whose smallest coding probability is largest (no
// cut-point spent on negligible tail mass), then lexicographic cut-points.
void rank_solutions(std::vector<SolveReport>& sols, double tie_tolerance) {
    using Iter = std::vector<SolveReport>::iterator;
    // Sorts [first, last) by key, then re-sorts each run of keys that chain
    // within tol (measured from the run's first element) with `inner`.
    const auto sort_with_ties = [](Iter first, Iter last, auto key, double tol, auto inner) {
        std::stable_sort(first, last, [&](const SolveReport& x, const SolveReport& y) {
            return key(x) < key(y);
        });
        for (Iter group = first; group != last;) {
            Iter end = group;
            while (end != last && key(*end) - key(*group) <= tol) ++end;
            inner(group, end);
            group = end;
        }
    };
    const auto lexicographic = [](Iter first, Iter last) {
        std::stable_sort(first, last, [](const SolveReport& x, const SolveReport& y) {
            const auto& a = x.codebook.cuts.values();
            const auto& b = y.codebook.cuts.values();
            return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
        });
    };
    const auto by_tail_mass = [&](Iter first, Iter last) {
        if (last - first < 2) return;
        const double scale = std::max(1.0, std::abs(min_log_q(*first)));
        sort_with_ties(
            first, last, [](const SolveReport& r) { return -min_log_q(r); }, 1e-9 * scale,
            lexicographic);
    };
    sort_with_ties(
        sols.begin(), sols.end(), [](const SolveReport& r) { return r.I1; }, tie_tolerance,
        by_tail_mass);
}

// Tail probabilities t = min(p, 1 - p) raised to `power`, pushing cut-points
// at or above the median further up and those below it further down (or the
// mirror image when `upward` is false).
std::vector<double> stretched_start(const Model& model, std::size_t n, double power, bool upward) {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = static_cast<double>(i + 1) / static_cast<double>(n + 1);
        const bool up = upward ? p >= 0.5 : p > 0.5;
        const double q = up ? 1.0 - std::pow(1.0 - p, power) : std::pow(p, power);
        a[i] = model.marginal().quantile(q);
    }
    return a;
}

}  // namespace

namespace {

std::vector<SolveReport> solve_level(const Model& model, std::size_t n, const SolveOptions& opts) {
    const auto& family = model.family();

    std::vector<std::vector<double>> starts;
    const auto add_start = [&](std::vector<double> s) {
        if (s.size() != n) return;
        if (!CutPointVector::admissible(s, family.support_lo, family.support_hi)) return;
        for (const auto& existing : starts) {
            if (existing == s) return;
        }
        starts.push_back(std::move(s));
    };
    add_start(quantile_start(model, n));
    for (std::size_t s = 1; s <= opts.extra_starts; ++s) {
        add_start(perturbed_start(model, n, opts.seed, s, opts.perturbation));
    }
    for (double power : opts.stretch_powers) {
        add_start(stretched_start(model, n, power, true));
        add_start(stretched_start(model, n, power, false));
    }
    for (const auto& w : opts.warm_starts) add_start(w);

    std::vector<std::optional<SolveReport>> results(starts.size());
    const auto run = [&](std::size_t i) {
        try {
            results[i] = newton_solve(model, CutPointVector(starts[i]), opts);
        } catch (const std::exception&) {
            results[i].reset();
        }
    };
    const std::size_t workers = std::min(std::max<std::size_t>(opts.threads, 1), starts.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < starts.size(); ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < starts.size(); i = next++) run(i);
            });
        }
    }

    // Deduplicate in start order so the outcome is independent of scheduling.
    std::vector<SolveReport> unique;
    for (auto& r : results) {
        if (!r || !r->converged) continue;
        if (!opts.keep_non_minima && r->classification != Classification::LocalMinimum) continue;
        const bool seen = std::any_of(unique.begin(), unique.end(), [&](const SolveReport& u) {
            return same_solution(u.codebook.cuts.points(), r->codebook.cuts.points(),
                                 opts.dedup_tolerance);
        });
        if (!seen) unique.push_back(std::move(*r));
    }
    rank_solutions(unique, opts.tie_tolerance);
    return unique;
}

}  // namespace

std::vector<std::vector<double>> extension_starts(const Model& model,
                                                  std::span<const double> parent) {
    const auto& family = model.family();
    const double lo = family.support_lo;
    const double hi = family.support_hi;
    const std::size_t n = parent.size();
    std::vector<std::vector<double>> out;
    if (n == 0) return out;

    const auto with = [&](double x, std::size_t pos) {
        std::vector<double> s(parent.begin(), parent.end());
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), x);
        if (CutPointVector::admissible(s, lo, hi) &&
            std::find(out.begin(), out.end(), s) == out.end()) {
            out.push_back(std::move(s));
        }
    };

    const auto outward = [&](double edge, double inner, double sign, double bound,
                             std::size_t pos) {
        std::vector<double> cands;
        const double spacing = std::abs(edge - inner);
        if (spacing > 0.0) {
            for (double k : {1.0, 1.5, 3.0}) cands.push_back(edge + sign * k * spacing);
        }
        if (inner != 0.0 && edge / inner > 1.0) {
            const double ratio = edge / inner;
            cands.push_back(edge * ratio);
            cands.push_back(edge * ratio * ratio);
        }
        const double s = model.marginal().local_scale(edge);
        for (double k : {2.0, 8.0, 32.0}) cands.push_back(edge + sign * k * s);
        for (double x : cands) {
            if (std::isfinite(bound) && !(sign * (bound - x) > 0.0)) x = 0.5 * (edge + bound);
            with(x, pos);
        }
    };

    // A single parent cut-point has no spacing to extrapolate; fall back on
    // the local scale alone.
    const double first = parent.front();
    const double last = parent.back();
    outward(last, n > 1 ? parent[n - 2] : last, 1.0, hi, n);
    outward(first, n > 1 ? parent[1] : first, -1.0, lo, 0);
    if (lo > -std::numeric_limits<double>::infinity() && first > lo && n > 1 && parent[1] > first) {
        // Geometric step toward a finite lower boundary.
        with(lo + (first - lo) * ((first - lo) / (parent[1] - lo)), 0);
    }
    for (std::size_t k = 0; k + 1 < n; ++k) with(0.5 * (parent[k] + parent[k + 1]), k + 1);
    return out;
}

namespace {

// Solves n = 1..n_max, seeding each level with extensions of the best
// solutions of the level below. `sink` receives every level.
template <class Sink>
void continuation_loop(const Model& model, std::size_t n_max, const SolveOptions& opts,
                       Sink&& sink) {
    std::vector<SolveReport> previous;
    for (std::size_t n = 1; n <= n_max; ++n) {
        SolveOptions level = opts;
        const std::size_t parents = std::min(opts.continuation_parents, previous.size());
        for (std::size_t p = 0; p < parents; ++p) {
            for (auto& s : extension_starts(model, previous[p].codebook.cuts.points())) {
                level.warm_starts.push_back(std::move(s));
            }
        }
        previous = solve_level(model, n, level);
        sink(n, previous);
    }
}

}  // namespace

std::vector<SolveReport> multi_start_solve(const Model& model, std::size_t n,
                                           const SolveOptions& opts) {
    if (n == 0) throw ArgumentError("n must be at least 1");
    if (!opts.continuation || n == 1) return solve_level(model, n, opts);
    std::vector<SolveReport> out;
    continuation_loop(model, n, opts, [&](std::size_t level, std::vector<SolveReport>& sols) {
        if (level == n) out = std::move(sols);
    });
    return out;
}

std::vector<SweepEntry> sweep_solve(const Model& model, std::size_t n_min, std::size_t n_max,
                                    const SolveOptions& opts) {
    if (n_min == 0 || n_min > n_max) throw ArgumentError("empty or invalid n-range");
    std::vector<SweepEntry> out;
    if (!opts.continuation) {
        for (std::size_t n = n_min; n <= n_max; ++n) out.push_back({n, solve_level(model, n, opts)});
        return out;
    }
    continuation_loop(model, n_max, opts, [&](std::size_t n, const std::vector<SolveReport>& sols) {
        if (n >= n_min) out.push_back({n, sols});
    });
    return out;
}

}  // namespace smml
