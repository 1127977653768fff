// Characteristic equations of the delta-well ring and their root solvers.
//
// Matching the ansatz psi = N cosh(d (theta - pi)) to the jump condition
// psi'(0+) - psi'(0-) + kappa psi(0) = 0 gives the bound equation
//
//     coth(pi d) = (2 / kappa) d,
//
// which has exactly one positive root. The cos(d (pi - theta)) ansatz gives
// cot(pi d) = -(2 / kappa) d (Derived), one root per interval
// (n - 1/2, n). The published unbound table instead satisfies
// cot(pi d) = +(2 / kappa) d, one root per (n - 1, n - 1/2); that form is
// kept as SignConvention::PaperCompat so the table stays reproducible.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core.hpp"
#include "detail/bracket.hpp"

namespace ringdelta {

enum class EquationKind { Bound, Unbound };
enum class SignConvention { Derived, PaperCompat };

inline const char* to_string(SignConvention c) {
    return c == SignConvention::Derived ? "derived" : "paper-compat";
}

/// A located root of a characteristic equation. Branch 0 is the bound root.
struct Root {
    double d;
    int branch;
    double residual;  ///< scaled residual magnitude at d, see solve_bound / solve_unbound
    int iterations;
};

/// coth(x) for x > 0 without cancellation near 0 or overflow at large x.
inline double safe_coth(double x) { return 1.0 + 2.0 / std::expm1(2.0 * x); }

/// coth(pi x) - (2 / kappa) x. Diverges to +inf as x -> 0+.
inline double bound_residual(double x, double kappa) {
    return safe_coth(pi * x) - (2.0 / kappa) * x;
}

/// cot(pi x) + (2/kappa) x (Derived) or cot(pi x) - (2/kappa) x (PaperCompat).
/// Has poles at the integers.
inline double unbound_residual(double x, double kappa, SignConvention c) {
    const double slope = 2.0 / kappa * x;
    const double cot = std::cos(pi * x) / std::sin(pi * x);
    return c == SignConvention::Derived ? cot + slope : cot - slope;
}

/// Open interval holding the unique root of unbound branch n >= 1.
inline std::pair<double, double> branch_interval(int n, SignConvention c) {
    if (n < 1) throw std::domain_error("unbound branch index must be >= 1");
    return c == SignConvention::Derived ? std::pair{n - 0.5, double(n)}
                                        : std::pair{n - 1.0, n - 0.5};
}

/// One branch of a characteristic equation at fixed kappa.
struct CharEquation {
    EquationKind kind;
    double kappa;
    SignConvention convention = SignConvention::Derived;

    double residual(double x) const {
        return kind == EquationKind::Bound ? bound_residual(x, kappa)
                                           : unbound_residual(x, kappa, convention);
    }
};

/// Unique positive root of coth(pi d) = (2/kappa) d.
///
/// The search runs on kappa - 2 d tanh(pi d), which has the same root, is
/// strictly decreasing on d > 0 and stays finite everywhere. Root::residual
/// is |bound_residual(d, kappa)|.
inline Root solve_bound(double kappa, const detail::BracketOptions& opt = {}) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::domain_error("kappa must be positive");
    auto h = [kappa](double x) { return kappa - 2.0 * x * std::tanh(pi * x); };

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double lo = std::max(eps, 0.5 * std::sqrt(kappa / (2.0 * pi)));
    double hi = std::max(kappa, 1.0) + 1.0;
    double hlo = h(lo), hhi = h(hi);
    for (int k = 0; hlo <= 0.0 && k < 2100; ++k) hlo = h(lo *= 0.5);
    for (int k = 0; hhi >= 0.0 && k < 2100; ++k) hhi = h(hi *= 2.0);
    if (!(hlo > 0.0) || !(hhi < 0.0))
        throw std::logic_error("solve_bound: failed to bracket the bound root");

    const auto r = detail::find_bracketed_root(h, lo, hi, hlo, hhi, opt);
    return {r.x, 0, std::abs(bound_residual(r.x, kappa)), r.iterations};
}

/// Root of unbound branch n inside branch_interval(n, c).
///
/// The unknown is the offset u in (0, 1/2) from the pole-free end of the
/// branch (d = n - u for Derived, d = n - 1 + u for PaperCompat). Multiplying
/// the cot form by sin(pi u) leaves
///
///     g(u) = kappa cos(pi u) - 2 d(u) sin(pi u),
///
/// smooth on [0, 1/2] with g(0) = kappa > 0 and g(1/2) < 0. Root::residual is
/// |g| / (kappa + 2 (n + 1)), which is bounded and well scaled for every kappa.
inline Root solve_unbound(double kappa, int n, SignConvention c,
                          const detail::BracketOptions& opt = {}) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::domain_error("kappa must be positive");
    if (n < 1) throw std::domain_error("unbound branch index must be >= 1");

    const bool derived = c == SignConvention::Derived;
    const double base = derived ? double(n) : double(n - 1);
    const double dir = derived ? -1.0 : 1.0;
    auto g = [=](double u) { return kappa * std::sin(pi * (0.5 - u)) - 2.0 * (base + dir * u) * std::sin(pi * u); };

    const auto r = detail::find_bracketed_root(g, 0.0, 0.5, g(0.0), g(0.5), opt);
    const double scale = kappa + 2.0 * (n + 1);
    return {base + dir * r.x, n, std::abs(r.fx) / scale, r.iterations};
}

/// coth ~ 1 approximation of the bound root.
inline double approx_bound(double kappa) { return 0.5 * kappa; }

/// Large-kappa approximation n kappa / 2 of the unbound roots. Only meaningful
/// when it lands inside the branch interval, which it does not in general.
inline double approx_unbound(double kappa, int n) { return 0.5 * n * kappa; }

struct ApproxErrorPoint {
    double kappa;
    double d;         ///< exact bound root
    double d_approx;  ///< kappa / 2
    double rel_error_percent;
};

inline std::vector<ApproxErrorPoint> approx_error_curve(const std::vector<double>& kappas) {
    std::vector<ApproxErrorPoint> out;
    out.reserve(kappas.size());
    for (double k : kappas) {
        const double d = solve_bound(k).d;
        const double d0 = approx_bound(k);
        out.push_back({k, d, d0, 100.0 * std::abs(d - d0) / d});
    }
    return out;
}

}  // namespace ringdelta
