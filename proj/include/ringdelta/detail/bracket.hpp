// Safeguarded bracketing root finder (Brent-Dekker with forced bisection).
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace ringdelta::detail {

struct BracketOptions {
    double rel_tol = 1e-12;
    int max_iter = 200;
};

struct BracketResult {
    double x;
    double fx;
    int iterations;
};

/// Finds a root of f in [a, b] given f(a) and f(b) of opposite sign (or one
/// of them zero). Interpolation steps that would leave the current bracket,
/// or that fail to halve it every two steps, are replaced by bisection, so
/// the bracket always shrinks and the result stays inside [a, b].
///
/// Iterates until the bracket can no longer be split in floating point.
/// Running out of iterations is an error only if the bracket is still wider
/// than rel_tol * |x|.
template <typename F>
BracketResult find_bracketed_root(F&& f, double a, double b, double fa, double fb,
                                  const BracketOptions& opt = {}) {
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if (std::signbit(fa) == std::signbit(fb) || std::isnan(fa) || std::isnan(fb))
        throw std::logic_error("find_bracketed_root: endpoints do not bracket a root");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    // b is the best estimate, a the previous one, c the counterpoint with f(c) of opposite sign.
    if (std::abs(fa) < std::abs(fb)) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = a, fc = fa;
    double d = b - a, e = d;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        if (std::signbit(fb) == std::signbit(fc)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + std::numeric_limits<double>::min();
        const double half = 0.5 * (c - b);
        if (fb == 0.0 || std::abs(half) <= tol) break;

        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, qq;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * half * s;  // secant
                qq = 1.0 - s;
            } else {
                const double qa = fa / fc, r = fb / fc;  // inverse quadratic
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                qq = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) qq = -qq;
            else p = -p;
            if (2.0 * p < std::min(3.0 * half * qq - std::abs(tol * qq), std::abs(e * qq))) {
                e = d;
                d = p / qq;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : std::copysign(tol, half);
        fb = f(b);
    }
    if (it >= opt.max_iter && std::abs(c - b) > opt.rel_tol * std::abs(b))
        throw std::runtime_error("find_bracketed_root: iteration limit reached");
    return {b, fb, it};
}

}  // namespace ringdelta::detail
