// Reference spectra that never touch the characteristic equations.
//
// In the Fourier basis |m> = exp(i m theta) / sqrt(2 pi), m = -M..M, the
// reduced Hamiltonian -d^2/dtheta^2 - kappa delta(theta) is
//
//     H = diag(m^2) - (kappa / 2 pi) 1 1^T,
//
// a diagonal matrix minus a rank-one update. Its eigenvalues split into the
// antisymmetric (sin) sector, exactly m^2 for m = 1..M, and the symmetric
// sector, the roots of the secular equation
//
//     1 = (kappa / 2 pi) sum_{m=-M}^{M} 1 / (m^2 - eps),
//
// one below 0 and one in each gap ((j-1)^2, j^2), j = 1..M. Each root is
// bracketed by that interlacing and found by bisection.
//
// grid_oracle is a second, physically different discretization: a periodic
// finite-difference Laplacian with the delta smeared over a few cells.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace ringdelta {

namespace detail {

/// Pairwise (cascade) sum of term(i) for i in [lo, hi).
template <typename Term>
double pairwise_sum(Term&& term, long lo, long hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (long i = lo; i < hi; ++i) s += term(i);
        return s;
    }
    const long mid = lo + (hi - lo) / 2;
    return pairwise_sum(term, lo, mid) + pairwise_sum(term, mid, hi);
}

// Symmetric-sector secular residual with the energy written as
// eps = j^2 + offset, so the distance to the nearest pole keeps full
// relative precision even where j^2 itself is large.
inline double secular_residual_shifted(long j, double offset, double kappa, long M) {
    const double jj = double(j) * double(j);
    auto term = [&](long m) {
        const double gap = double(m) * double(m) - jj;  // exact for the M used here
        return (m == 0 ? 1.0 : 2.0) / (gap - offset);
    };
    return 1.0 - kappa / (2.0 * pi) * pairwise_sum(term, 0, M + 1);
}

}  // namespace detail

/// 1 - (kappa / 2 pi) sum_{m=-M}^{M} 1 / (m^2 - eps). Throws std::domain_error
/// when eps is within 1e-13 of one of the poles m^2.
inline double secular_residual(double eps, double kappa, long M) {
    if (M < 1) throw std::domain_error("secular_residual: M must be >= 1");
    const double r = std::round(std::sqrt(std::max(eps, 0.0)));
    for (double m : {r - 1.0, r, r + 1.0}) {
        if (m >= 0.0 && m <= double(M) && std::abs(eps - m * m) < 1e-13)
            throw std::domain_error("secular_residual: eps coincides with pole m^2 = " + std::to_string(m * m));
    }
    auto term = [&](long m) {
        const double mm = double(m) * double(m);
        return (m == 0 ? 1.0 : 2.0) / (mm - eps);
    };
    return 1.0 - kappa / (2.0 * pi) * detail::pairwise_sum(term, 0, M + 1);
}

struct OracleConfig {
    double kappa;
    long M;                            ///< modes -M..M, matrix size 2M + 1
    std::optional<std::size_t> lowest;  ///< only solve the lowest symmetric roots
};

struct OracleSpectrum {
    std::vector<double> eigenvalues;  ///< all computed eigenvalues, ascending
    std::vector<std::size_t> multiplicities;  ///< per distinct value, parallel to distinct_values
    std::vector<double> distinct_values;
    std::vector<double> symmetric;       ///< secular roots, ascending
    std::vector<double> antisymmetric;   ///< m^2, m = 1..M
    std::vector<double> secular_residuals;  ///< |residual| at each symmetric root
    long M;
};

namespace detail {

// Bisection for the symmetric root in the gap ((j-1)^2, j^2), or below 0 for
// j = 0, in the shifted variable. The residual is strictly decreasing there.
inline double secular_root(long j, double kappa, long M, double& residual_out) {
    auto f = [&](double off) { return secular_residual_shifted(j, off, kappa, M); };
    double lo, hi;  // offsets from j^2; f(lo) > 0 > f(hi)
    if (j == 0) {
        hi = -std::numeric_limits<double>::min();
        lo = -(0.25 * kappa * kappa + kappa);
        for (int k = 0; !(f(lo) > 0.0); ++k) {
            if (k > 2000) throw std::logic_error("oracle: cannot bracket lowest root");
            lo *= 2.0;
        }
    } else {
        lo = -double(2 * j - 1);  // (j-1)^2 - j^2
        hi = 0.0;
    }
    // Both endpoints of a gap are poles; only the open interval is probed.
    for (int it = 0; it < 2200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) {
            residual_out = 0.0;
            return double(j) * double(j) + mid;
        }
        (fm > 0.0 ? lo : hi) = mid;
    }
    double best = lo;
    double fb = (j != 0 && lo == -double(2 * j - 1)) ? HUGE_VAL : std::abs(f(lo));
    if (hi < 0.0) {
        const double fh = std::abs(f(hi));
        if (fh < fb) {
            best = hi;
            fb = fh;
        }
    }
    if (!std::isfinite(fb)) throw std::logic_error("oracle: bisection collapsed onto a pole");
    residual_out = fb;
    return double(j) * double(j) + best;
}

}  // namespace detail

inline OracleSpectrum oracle_spectrum(const OracleConfig& cfg) {
    if (!(cfg.kappa > 0.0)) throw std::domain_error("oracle: kappa must be positive");
    if (cfg.M < 1) throw std::domain_error("oracle: M must be >= 1");
    // j^2 - m^2 must stay an exact double.
    if (cfg.M > 50'000'000) throw std::domain_error("oracle: M too large");

    OracleSpectrum out;
    out.M = cfg.M;
    const long nsym = std::min<long>(cfg.M + 1, cfg.lowest ? long(*cfg.lowest) : cfg.M + 1);
    for (long j = 0; j < nsym; ++j) {
        double res = 0.0;
        out.symmetric.push_back(detail::secular_root(j, cfg.kappa, cfg.M, res));
        out.secular_residuals.push_back(res);
    }
    for (long m = 1; m <= cfg.M; ++m) out.antisymmetric.push_back(double(m) * double(m));

    out.eigenvalues = out.symmetric;
    out.eigenvalues.insert(out.eigenvalues.end(), out.antisymmetric.begin(), out.antisymmetric.end());
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    for (double v : out.eigenvalues) {
        if (!out.distinct_values.empty() &&
            std::abs(v - out.distinct_values.back()) <= 1e-12 * std::max(1.0, std::abs(v))) {
            ++out.multiplicities.back();
        } else {
            out.distinct_values.push_back(v);
            out.multiplicities.push_back(1);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-difference grid oracle
// ---------------------------------------------------------------------------

struct GridOracleConfig {
    double kappa;           ///< may be 0 for the free ring
    std::size_t N = 256;    ///< grid points theta_i = 2 pi i / N, well at i = 0
    double well_width = 0;  ///< top-hat width; <= one cell means a single-cell well
    std::size_t count = 3;  ///< number of lowest eigenpairs
    double tol = 1e-9;      ///< on ||A x - rho x|| / max(1, |rho|), plus a rounding floor in ||A||
    int max_iter = 20000;
};

struct GridSpectrum {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;  ///< unit 2-norm
    std::vector<int> iterations;
    std::vector<double> potential;  ///< per-site potential actually used
    double h;
};

class GridConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Solves the cyclic tridiagonal system with diagonal diag and every
// off-diagonal (including the two corner entries) equal to off.
// Sherman-Morrison on top of the Thomas algorithm.
class CyclicTridiagonal {
public:
    CyclicTridiagonal(std::vector<double> diag, double off) : b_(std::move(diag)), off_(off) {
        const std::size_t n = b_.size();
        gamma_ = -b_[0];
        std::vector<double> bb = b_;
        bb[0] -= gamma_;
        bb[n - 1] -= off_ * off_ / gamma_;
        // LU of the plain tridiagonal part, stored as c' and the pivots.
        cp_.resize(n);
        piv_.resize(n);
        piv_[0] = bb[0];
        for (std::size_t i = 1; i < n; ++i) {
            cp_[i - 1] = off_ / piv_[i - 1];
            piv_[i] = bb[i] - off_ * cp_[i - 1];
        }
        std::vector<double> u(n, 0.0);
        u[0] = gamma_;
        u[n - 1] = off_;
        z_ = plain_solve(u);
        zfac_ = 1.0 + z_[0] + off_ * z_[n - 1] / gamma_;
    }

    std::vector<double> solve(const std::vector<double>& rhs) const {
        const std::size_t n = b_.size();
        std::vector<double> y = plain_solve(rhs);
        const double fact = (y[0] + off_ * y[n - 1] / gamma_) / zfac_;
        for (std::size_t i = 0; i < n; ++i) y[i] -= fact * z_[i];
        return y;
    }

private:
    std::vector<double> plain_solve(const std::vector<double>& r) const {
        const std::size_t n = b_.size();
        std::vector<double> y(n);
        y[0] = r[0] / piv_[0];
        for (std::size_t i = 1; i < n; ++i) y[i] = (r[i] - off_ * y[i - 1]) / piv_[i];
        for (std::size_t i = n - 1; i-- > 0;) y[i] -= cp_[i] * y[i + 1];
        return y;
    }

    std::vector<double> b_;
    double off_;
    double gamma_;
    std::vector<double> cp_, piv_, z_;
    double zfac_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return pairwise_sum([&](long i) { return a[i] * b[i]; }, 0, long(a.size()));
}

inline void normalize(std::vector<double>& x) {
    const double n = std::sqrt(dot(x, x));
    for (double& v : x) v /= n;
}

}  // namespace detail

/// Lowest cfg.count eigenpairs of the periodic finite-difference Hamiltonian
/// by shifted inverse iteration, deflating each converged vector.
inline GridSpectrum grid_oracle(const GridOracleConfig& cfg) {
    if (cfg.N < 64) throw std::domain_error("grid_oracle: N must be >= 64");
    if (!(cfg.kappa >= 0.0)) throw std::domain_error("grid_oracle: kappa must be non-negative");
    if (cfg.count == 0 || cfg.count >= cfg.N) throw std::domain_error("grid_oracle: bad eigenpair count");

    const std::size_t n = cfg.N;
    const double h = 2.0 * pi / double(n);
    const double inv_h2 = 1.0 / (h * h);

    // Odd number of cells centred on site 0 so the well stays reflection symmetric.
    std::size_t half_cells = 0;
    if (cfg.well_width > h) half_cells = std::size_t(std::lround((cfg.well_width / h - 1.0) / 2.0));
    if (2 * half_cells + 1 > n / 2) throw std::domain_error("grid_oracle: well wider than half the ring");
    const double depth = cfg.kappa / (double(2 * half_cells + 1) * h);

    GridSpectrum out;
    out.h = h;
    out.potential.assign(n, 0.0);
    for (std::size_t k = 0; k <= half_cells; ++k) {
        out.potential[k] = -depth;
        out.potential[(n - k) % n] = -depth;
    }

    auto apply = [&](const std::vector<double>& x) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double l = x[(i + n - 1) % n], r = x[(i + 1) % n];
            y[i] = inv_h2 * (2.0 * x[i] - l - r) + out.potential[i] * x[i];
        }
        return y;
    };

    // Gershgorin lower bound; A - sigma I stays positive definite for every shift used.
    double sigma = -depth - 1.0;
    const double floor = 32.0 * std::numeric_limits<double>::epsilon() * (4.0 * inv_h2 + depth);
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    for (std::size_t level = 0; level < cfg.count; ++level) {
        std::vector<double> diag(n);
        for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 * inv_h2 + out.potential[i] - sigma;
        const detail::CyclicTridiagonal solver(std::move(diag), -inv_h2);

        auto deflate = [&](std::vector<double>& x) {
            for (const auto& v : out.eigenvectors) {
                const double c = detail::dot(x, v);
                for (std::size_t i = 0; i < n; ++i) x[i] -= c * v[i];
            }
        };

        std::vector<double> x(n);
        for (double& v : x) v = uni(rng);
        deflate(x);
        detail::normalize(x);

        double rho = 0.0, resid = HUGE_VAL;
        int it = 0;
        for (; it < cfg.max_iter; ++it) {
            x = solver.solve(x);
            deflate(x);
            detail::normalize(x);
            const auto ax = apply(x);
            rho = detail::dot(x, ax);
            double r2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) r2 += (ax[i] - rho * x[i]) * (ax[i] - rho * x[i]);
            resid = std::sqrt(r2);
            if (resid <= cfg.tol * std::max(1.0, std::abs(rho)) + floor) break;
        }
        if (it >= cfg.max_iter) {
            std::ostringstream msg;
            msg << "grid_oracle: level " << level << " did not converge after " << it
                << " iterations (rho = " << rho << ", residual = " << resid << ")";
            throw GridConvergenceError(msg.str());
        }
        // Polish at a near-exact shift so later deflations start from a
        // vector accurate to rounding, not just to cfg.tol.
        {
            std::vector<double> pd(n);
            const double sp = rho - 1e-6 * std::max(1.0, std::abs(rho));
            for (std::size_t i = 0; i < n; ++i) pd[i] = 2.0 * inv_h2 + out.potential[i] - sp;
            const detail::CyclicTridiagonal polish(std::move(pd), -inv_h2);
            for (int k = 0; k < 2; ++k) {
                x = polish.solve(x);
                deflate(x);
                detail::normalize(x);
            }
            rho = detail::dot(x, apply(x));
        }
        out.eigenvalues.push_back(rho);
        out.eigenvectors.push_back(std::move(x));
        out.iterations.push_back(it + 1);
        if (level == 0) sigma = rho - 0.1 * std::max(1.0, std::abs(rho));
    }
    return out;
}

}  // namespace ringdelta
