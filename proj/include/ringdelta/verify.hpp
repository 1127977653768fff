// Checks that bind the analytic states to independent numerics: quadrature
// norms and overlaps, the jump condition at the well, the local eigenvalue
// equation, and convergence of the Fourier oracle onto the analytic spectrum.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "charfn.hpp"
#include "oracle.hpp"
#include "states.hpp"

namespace ringdelta {

/// Every tolerance the suite uses, in one place.
struct VerifyTolerances {
    double normalization = 1e-10;
    double jump = 1e-10;
    double eigen_residual = 1e-5;
    double fd_step = 1e-4;
    int fd_points = 100;
    double orthogonality = 1e-8;
    double spectrum = 1e-6;
    double order_expected = 1.0;
    double order_halfwidth = 0.2;
    /// Levels whose oracle error is below this at the coarsest M are treated
    /// as converged; their order cannot be measured above rounding noise.
    double order_noise_floor = 1e-9;
    double quadrature = 1e-13;  ///< relative target of each adaptive panel
    unsigned quadrature_depth = 20;
};

struct CheckResult {
    std::string name;
    double value;
    double tolerance;
    bool pass;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
    }

    /// Registers a check that passes when value <= tolerance (NaN fails).
    void add_upper(std::string name, double value, double tolerance) {
        checks.push_back({std::move(name), value, tolerance, value <= tolerance});
    }
    void add(std::string name, double value, double tolerance, bool pass) {
        checks.push_back({std::move(name), value, tolerance, pass});
    }

    void merge(const VerificationReport& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
        std::stable_sort(checks.begin(), checks.end(),
                         [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
        for (std::size_t i = 1; i < checks.size(); ++i)
            if (checks[i].name == checks[i - 1].name)
                throw std::logic_error("VerificationReport: duplicate check " + checks[i].name);
    }

    /// One "name: status value=... tolerance=..." line per check, then "overall: ...".
    std::string to_text() const {
        std::ostringstream os;
        os << std::setprecision(17);
        for (const auto& c : checks)
            os << c.name << ": " << (c.pass ? "pass" : "FAIL") << " value=" << c.value
               << " tolerance=" << c.tolerance << '\n';
        os << "overall: " << (passed() ? "pass" : "FAIL") << '\n';
        return os.str();
    }
};

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Integral of f over [0, 2 pi] as a sum of adaptive Gauss-Kronrod panels.
/// panels >= 2 and even, so theta = pi is always a panel edge; the well at
/// 0 == 2 pi sits on the outer edges.
template <typename F>
double ring_integral(F&& f, const VerifyTolerances& tol = {}, int panels = 2) {
    if (panels < 2 || panels % 2 != 0) throw std::invalid_argument("ring_integral: panels must be even");
    using boost::math::quadrature::gauss_kronrod;
    const double w = 2.0 * pi / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = p * w, b = (p + 1 == panels) ? 2.0 * pi : (p + 1) * w;
        total += gauss_kronrod<double, 31>::integrate(f, a, b, tol.quadrature_depth, tol.quadrature);
    }
    return total;
}

inline double norm_integral(const State& s, const VerifyTolerances& tol = {}, int panels = 2) {
    return ring_integral([&](double t) { const double v = eval_psi(s, t); return v * v; }, tol, panels);
}

inline double overlap(const State& a, const State& b, const VerifyTolerances& tol = {}) {
    return ring_integral([&](double t) { return eval_psi(a, t) * eval_psi(b, t); }, tol);
}

// ---------------------------------------------------------------------------
// Local checks
// ---------------------------------------------------------------------------

struct JumpTerms {
    double dpsi_plus;   ///< psi'(0+)
    double dpsi_minus;  ///< psi'(0-), taken at theta = 2 pi
    double psi0;
};

inline JumpTerms jump_terms(const State& s) {
    return {eval_dpsi(s, 0.0), eval_dpsi(s, 2.0 * pi), eval_psi(s, 0.0)};
}

/// |psi'(0+) - psi'(0-) + kappa psi(0)| divided by the sum of the three
/// magnitudes (or 1 if that sum is below 1). Scale-free, so one tolerance
/// fits both shallow and very deep wells.
inline double jump_residual(const State& s, double kappa) {
    const auto j = jump_terms(s);
    const double r = j.dpsi_plus - j.dpsi_minus + kappa * j.psi0;
    const double scale = std::abs(j.dpsi_plus) + std::abs(j.dpsi_minus) + std::abs(kappa * j.psi0);
    return std::abs(r) / std::max(1.0, scale);
}

/// max_i |psi''_fd(theta_i) + eps psi(theta_i)| / ((1 + |eps|) max_i |psi(theta_i)|)
/// over points theta_i = 2 pi (i + 1/2) / points, central differences of step h.
inline double eigen_residual(const State& s, double h = 1e-4, int points = 100) {
    const double e = energy(s);
    double worst = 0.0, psi_max = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = 2.0 * pi * (i + 0.5) / points;
        const double p0 = eval_psi(s, t);
        const double d2 = (eval_psi(s, t + h) - 2.0 * p0 + eval_psi(s, t - h)) / (h * h);
        worst = std::max(worst, std::abs(d2 + e * p0));
        psi_max = std::max(psi_max, std::abs(p0));
    }
    return worst / ((1.0 + std::abs(e)) * psi_max);
}

inline VerificationReport check_state(const State& s, double kappa, const VerifyTolerances& tol = {}) {
    const std::string p = label(s) + ".";
    VerificationReport rep;
    rep.add_upper(p + "eigen_residual", eigen_residual(s, tol.fd_step, tol.fd_points), tol.eigen_residual);
    rep.add_upper(p + "jump", jump_residual(s, kappa), tol.jump);
    rep.add_upper(p + "normalization", std::abs(norm_integral(s, tol) - 1.0), tol.normalization);
    return rep;
}

inline VerificationReport check_orthogonality(const std::vector<State>& states, const VerifyTolerances& tol = {}) {
    VerificationReport rep;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j)
            rep.add_upper("overlap." + label(states[i]) + "." + label(states[j]),
                          std::abs(overlap(states[i], states[j], tol)), tol.orthogonality);
    return rep;
}

// ---------------------------------------------------------------------------
// Convergence
// ---------------------------------------------------------------------------

/// Richardson extrapolation of values computed at M, r M, r^2 M, ... assuming
/// an error expansion in powers 1/M, 1/M^2, ... . Returns the last entry of
/// the full tableau.
inline double richardson(std::vector<double> v, double ratio = 2.0) {
    if (v.empty()) throw std::invalid_argument("richardson: no values");
    double rp = 1.0;
    for (std::size_t level = 1; level < v.size(); ++level) {
        rp *= ratio;
        for (std::size_t i = 0; i + level < v.size(); ++i) v[i] = (rp * v[i + 1] - v[i]) / (rp - 1.0);
    }
    return v.front();
}

/// Least-squares slope of -log|err| against log M.
inline double observed_order(const std::vector<double>& Ms, const std::vector<double>& errs) {
    if (Ms.size() != errs.size() || Ms.size() < 2) throw std::invalid_argument("observed_order: need >= 2 points");
    const std::size_t n = Ms.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(Ms[i]), y = std::log(std::abs(errs[i]));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Compares full_spectrum(kappa, count, c) with the Fourier oracle over a
/// doubling M schedule: per level, the Richardson-extrapolated oracle value
/// must match the analytic energy, and the oracle error must fall off at
/// order 1. sin levels are compared exactly at every M.
inline VerificationReport check_spectrum(double kappa, std::size_t count, const std::vector<long>& M_schedule,
                                         SignConvention c = SignConvention::Derived,
                                         const VerifyTolerances& tol = {}) {
    if (M_schedule.size() < 2) throw std::invalid_argument("check_spectrum: need at least two M values");
    for (std::size_t i = 1; i < M_schedule.size(); ++i)
        if (M_schedule[i] != 2 * M_schedule[i - 1])
            throw std::invalid_argument("check_spectrum: M schedule must double");

    const auto analytic = full_spectrum(kappa, SpectrumLimit{count, std::nullopt}, c);
    std::size_t nsym = 0;
    for (const auto& s : analytic) nsym += std::holds_alternative<UnboundSinState>(s) ? 0 : 1;

    std::vector<OracleSpectrum> spectra;
    for (long M : M_schedule) spectra.push_back(oracle_spectrum({kappa, M, nsym}));

    std::vector<double> Ms;
    for (long M : M_schedule) Ms.push_back(double(M));

    VerificationReport rep;
    std::size_t sym_index = 0;
    for (const auto& s : analytic) {
        const std::string p = "spectrum." + label(s) + ".";
        const double target = energy(s);
        if (const auto* sn = std::get_if<UnboundSinState>(&s)) {
            double worst = 0.0;
            for (const auto& o : spectra) worst = std::max(worst, std::abs(o.antisymmetric.at(sn->n - 1) - target));
            rep.add_upper(p + "exact", worst, tol.spectrum);
            continue;
        }
        std::vector<double> vals, errs;
        for (const auto& o : spectra) {
            vals.push_back(o.symmetric.at(sym_index));
            errs.push_back(vals.back() - target);
        }
        ++sym_index;
        rep.add_upper(p + "extrapolated", std::abs(richardson(vals) - target), tol.spectrum);
        if (std::abs(errs.front()) < tol.order_noise_floor) {
            rep.add(p + "order", std::numeric_limits<double>::quiet_NaN(), tol.order_halfwidth, true);
        } else {
            const double order = observed_order(Ms, errs);
            rep.add(p + "order", order, tol.order_halfwidth,
                    std::abs(order - tol.order_expected) <= tol.order_halfwidth);
        }
    }
    return rep;
}

/// Per-state checks for the first count states of the spectrum, plus all
/// pairwise overlaps and the oracle comparison.
inline VerificationReport verify_all(double kappa, std::size_t count, const std::vector<long>& M_schedule,
                                     SignConvention c = SignConvention::Derived,
                                     const VerifyTolerances& tol = {}) {
    const auto states = full_spectrum(kappa, SpectrumLimit{count, std::nullopt}, c);
    VerificationReport rep;
    for (const auto& s : states) rep.merge(check_state(s, kappa, tol));
    rep.merge(check_orthogonality(states, tol));
    rep.merge(check_spectrum(kappa, count, M_schedule, c, tol));
    return rep;
}

}  // namespace ringdelta
