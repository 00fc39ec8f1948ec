#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace smml::detail {

// 21-point Kronrod rule with its embedded 10-point Gauss rule.
// xgk[1], xgk[3], ... are the Gauss abscissae.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

template <std::size_t K>
using Values = std::array<double, K>;

template <std::size_t K>
struct Segment {
    double a = 0.0;
    double b = 0.0;
    Values<K> value{};
    Values<K> abs_value{};
    Values<K> error{};
    double priority = 0.0;

    bool operator<(const Segment& other) const { return priority < other.priority; }
};

template <std::size_t K>
struct AdaptiveResult {
    Values<K> value{};
    Values<K> abs_value{};  // integral of |f_k|, the scale for relative tolerances
    Values<K> error{};
    std::size_t subintervals = 0;
    bool converged = false;
};

// Error estimate follows QUADPACK's qk21: scaled |K21 - G10| with a
// roundoff floor.
template <std::size_t K, class F>
Segment<K> gk21(const F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<Values<K>, 21> fv;
    fv[0] = f(center);
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        fv[1 + 2 * j] = f(center - dx);
        fv[2 + 2 * j] = f(center + dx);
    }

    Segment<K> seg;
    seg.a = a;
    seg.b = b;
    for (std::size_t k = 0; k < K; ++k) {
        double kron = kWgk[10] * fv[0][k];
        double gauss = 0.0;
        double resabs = kWgk[10] * std::abs(fv[0][k]);
        for (std::size_t j = 0; j < 10; ++j) {
            const double pair = fv[1 + 2 * j][k] + fv[2 + 2 * j][k];
            kron += kWgk[j] * pair;
            resabs += kWgk[j] * (std::abs(fv[1 + 2 * j][k]) + std::abs(fv[2 + 2 * j][k]));
            if (j % 2 == 1) gauss += kWg[j / 2] * pair;
        }
        const double mean = 0.5 * kron;
        double resasc = kWgk[10] * std::abs(fv[0][k] - mean);
        for (std::size_t j = 0; j < 10; ++j) {
            resasc += kWgk[j] * (std::abs(fv[1 + 2 * j][k] - mean) +
                                 std::abs(fv[2 + 2 * j][k] - mean));
        }
        const double w = std::abs(half);
        kron *= half;
        gauss *= half;
        resabs *= w;
        resasc *= w;
        double err = std::abs(kron - gauss);
        if (resasc != 0.0 && err != 0.0) {
            err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        }
        if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
        seg.value[k] = kron;
        seg.abs_value[k] = resabs;
        seg.error[k] = err;
    }
    return seg;
}

/// Globally adaptive bisection: always split the segment with the largest
/// normalized error until every component meets rel_tol * integral(|f_k|)
/// (or abs_tol), or the subinterval cap is reached.
template <std::size_t K, class F>
AdaptiveResult<K> integrate_adaptive(const F& f, double a, double b, double rel_tol,
                                     double abs_tol, std::size_t max_subintervals) {
    AdaptiveResult<K> out;
    if (!(a < b)) {
        out.converged = true;
        return out;
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();

    Segment<K> first = gk21<K>(f, a, b);
    Values<K> scale{};
    for (std::size_t k = 0; k < K; ++k) scale[k] = std::max(first.abs_value[k], 1e-300);

    const auto priority = [&](const Segment<K>& s) {
        double p = 0.0;
        for (std::size_t k = 0; k < K; ++k) p = std::max(p, s.error[k] / scale[k]);
        return p;
    };

    std::priority_queue<Segment<K>> heap;
    first.priority = priority(first);
    heap.push(first);

    Values<K> total{}, total_abs{}, total_err{};
    const auto recompute = [&]() {
        total.fill(0.0);
        total_abs.fill(0.0);
        total_err.fill(0.0);
        auto copy = heap;
        while (!copy.empty()) {
            const auto& s = copy.top();
            for (std::size_t k = 0; k < K; ++k) {
                total[k] += s.value[k];
                total_abs[k] += s.abs_value[k];
                total_err[k] += s.error[k];
            }
            copy.pop();
        }
    };
    const auto done = [&]() {
        for (std::size_t k = 0; k < K; ++k) {
            const double tol = std::max(abs_tol, rel_tol * total_abs[k]);
            if (total_err[k] > tol) return false;
        }
        return true;
    };

    for (std::size_t k = 0; k < K; ++k) {
        total[k] = first.value[k];
        total_abs[k] = first.abs_value[k];
        total_err[k] = first.error[k];
    }

    while (!done() && heap.size() < max_subintervals) {
        Segment<K> worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) <= 4.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            break;  // cannot split further in double precision
        }
        heap.pop();
        Segment<K> left = gk21<K>(f, worst.a, mid);
        Segment<K> right = gk21<K>(f, mid, worst.b);
        left.priority = priority(left);
        right.priority = priority(right);
        for (std::size_t k = 0; k < K; ++k) {
            total[k] += left.value[k] + right.value[k] - worst.value[k];
            total_abs[k] += left.abs_value[k] + right.abs_value[k] - worst.abs_value[k];
            total_err[k] += left.error[k] + right.error[k] - worst.error[k];
        }
        heap.push(left);
        heap.push(right);
    }
    // Running sums drift; recompute from the segments.
    recompute();
    out.value = total;
    out.abs_value = total_abs;
    out.error = total_err;
    out.subintervals = heap.size();
    out.converged = done();
    return out;
}

}  // namespace smml::detail
