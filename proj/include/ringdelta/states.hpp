// Eigenstates of the delta-well ring in reduced units, theta in [0, 2 pi)
// with the well at theta = 0.
//
//   bound:  psi = N cosh(d (theta - pi)),  eps = -d^2
//   cos:    psi = C cos(d (pi - theta)),   eps = +d^2, d an unbound root
//   sin:    psi = sin(n (pi - theta)) / sqrt(pi), eps = n^2
//
// The sin family has a node at the well and never feels it; it sits exactly
// at the free-ring levels and completes the spectrum.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "charfn.hpp"
#include "core.hpp"

namespace ringdelta {

struct BoundState {
    double d;
    double N;      ///< may underflow to 0 for very deep wells; log_N is always finite
    double log_N;
    double eps;
};

struct UnboundCosState {
    double d;
    double C;
    double eps;
    int branch;
};

struct UnboundSinState {
    int n;
    double eps;
    double norm;  ///< 1 / sqrt(pi)
};

using State = std::variant<BoundState, UnboundCosState, UnboundSinState>;

namespace detail {

// log(sinh(2 pi d) / (2 d) + pi), finite for every d > 0.
inline double log_bound_norm_integral(double d) {
    const double x = 2.0 * pi * d;
    if (x < 700.0) return std::log(std::sinh(x) / (2.0 * d) + pi);
    const double log_a = x - std::log(4.0 * d);
    return log_a + std::log1p(pi * std::exp(-log_a));
}

inline double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace detail

inline BoundState make_bound_from_root(double d) {
    const double log_N = -0.5 * detail::log_bound_norm_integral(d);
    return {d, std::exp(log_N), log_N, -d * d};
}

inline BoundState make_bound(double kappa) { return make_bound_from_root(solve_bound(kappa).d); }

inline UnboundCosState make_cos_from_root(double d, int branch) {
    // The integral of cos^2(d (pi - theta)) over the ring is pi + sin(2 pi d) / (2 d).
    const double C = 1.0 / std::sqrt(std::sin(2.0 * pi * d) / (2.0 * d) + pi);
    return {d, C, d * d, branch};
}

inline UnboundCosState make_cos(double kappa, int n, SignConvention c = SignConvention::Derived) {
    return make_cos_from_root(solve_unbound(kappa, n, c).d, n);
}

inline UnboundSinState make_sin(int n) {
    if (n < 1) throw std::domain_error("sin state index must be >= 1");
    return {n, double(n) * double(n), 1.0 / std::sqrt(pi)};
}

inline double energy(const State& s) {
    return std::visit([](const auto& st) { return st.eps; }, s);
}

inline std::string label(const State& s) {
    struct {
        std::string operator()(const BoundState&) const { return "bound"; }
        std::string operator()(const UnboundCosState& c) const { return "cos" + std::to_string(c.branch); }
        std::string operator()(const UnboundSinState& c) const { return "sin" + std::to_string(c.n); }
    } v;
    return std::visit(v, s);
}

/// Wavefunction value. theta is expected in [0, 2 pi]; theta = 2 pi is the
/// left limit at the well.
inline double eval_psi(const BoundState& s, double theta) {
    const double x = s.d * (theta - pi);
    if (pi * s.d < 350.0) return s.N * std::cosh(x);
    return std::exp(s.log_N + detail::log_cosh(x));
}
inline double eval_psi(const UnboundCosState& s, double theta) { return s.C * std::cos(s.d * (pi - theta)); }
inline double eval_psi(const UnboundSinState& s, double theta) { return s.norm * std::sin(s.n * (pi - theta)); }
inline double eval_psi(const State& s, double theta) {
    return std::visit([theta](const auto& st) { return eval_psi(st, theta); }, s);
}

/// Analytic dpsi/dtheta on the open interval (0, 2 pi), extended continuously
/// to both ends: theta = 0 gives psi'(0+), theta = 2 pi gives psi'(0-).
inline double eval_dpsi(const BoundState& s, double theta) {
    const double x = s.d * (theta - pi);
    if (pi * s.d < 350.0) return s.N * s.d * std::sinh(x);
    // sinh(x) = sign(x) cosh(x) tanh(|x|)
    return std::copysign(std::exp(s.log_N + detail::log_cosh(x)) * s.d * std::tanh(std::abs(x)), x);
}
inline double eval_dpsi(const UnboundCosState& s, double theta) {
    return s.C * s.d * std::sin(s.d * (pi - theta));
}
inline double eval_dpsi(const UnboundSinState& s, double theta) {
    return -s.norm * s.n * std::cos(s.n * (pi - theta));
}
inline double eval_dpsi(const State& s, double theta) {
    return std::visit([theta](const auto& st) { return eval_dpsi(st, theta); }, s);
}

/// Either a maximum number of states, an energy ceiling, or both.
struct SpectrumLimit {
    std::optional<std::size_t> count;
    std::optional<double> eps_max;
};

/// Bound state, cos states and sin states merged and sorted by energy.
/// Ties (only possible in floating point as kappa -> 0) keep cos before sin.
inline std::vector<State> full_spectrum(double kappa, SpectrumLimit limit,
                                        SignConvention c = SignConvention::Derived) {
    if (!limit.count && !limit.eps_max) throw std::invalid_argument("full_spectrum: no limit given");
    const std::size_t want = limit.count.value_or(static_cast<std::size_t>(-1));
    const double ceiling = limit.eps_max.value_or(HUGE_VAL);

    std::vector<State> out;
    out.emplace_back(make_bound(kappa));
    // Branch n contributes a cos root above (n-1)^2 and the sin level n^2;
    // with a count limit, n up to count is always enough.
    for (int n = 1;; ++n) {
        const double floor_n = double(n - 1) * double(n - 1);
        if (floor_n > ceiling) break;
        if (limit.count && static_cast<std::size_t>(n) > *limit.count) break;
        out.emplace_back(make_cos(kappa, n, c));
        out.emplace_back(make_sin(n));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const State& a, const State& b) { return energy(a) < energy(b); });
    std::erase_if(out, [&](const State& s) { return energy(s) > ceiling; });
    if (out.size() > want) out.resize(want);
    return out;
}

/// Ring radius (bohr, atomic units) at which the bound root is d = 1/2,
/// i.e. kappa = 2 q R0^2 = tanh(pi / 2).
inline double smooth_radius(double q) {
    if (!(q > 0.0)) throw std::domain_error("q must be positive");
    return std::sqrt(std::tanh(pi / 2.0) / (2.0 * q));
}

}  // namespace ringdelta
