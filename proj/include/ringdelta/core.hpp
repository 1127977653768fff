// Particle on a ring with an attractive delta well: parameter reduction.
//
// Everything downstream works in reduced units, where the Schroedinger
// equation reads
//
//     psi'' + (eps + kappa * delta(theta)) * psi = 0,   theta in [0, 2 pi)
//
// with kappa = 2 q e m R0^2 / hbar^2 and eps = 2 m R0^2 E / hbar^2.
// Atomic units (hbar = m = e = 1) are the default; energies come back in
// hartree and lengths in bohr.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ringdelta {

inline constexpr double pi = std::numbers::pi;

/// Physical description of the ring and the well at theta = 0.
struct SystemParams {
    double q = 1.0;     ///< well charge, in units of e (> 0, attractive)
    double R0 = 1.0;    ///< ring radius in bohr
    double m = 1.0;     ///< particle mass in electron masses
    double hbar = 1.0;
    double e = 1.0;

    /// Throws std::domain_error unless q, R0, m, hbar and e are all positive.
    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::domain_error(std::string(name) + " must be positive and finite");
        };
        positive(q, "q");
        positive(R0, "R0");
        positive(m, "m");
        positive(hbar, "hbar");
        positive(e, "e");
    }
};

/// Dimensionless well strength and the slope lambda = 2 / (pi kappa) of the
/// characteristic equation coth(d') = lambda d'.
struct ReducedParams {
    double kappa;
    double lambda;

    static ReducedParams from_kappa(double kappa) {
        if (!(kappa > 0.0) || std::isnan(kappa))
            throw std::domain_error("kappa must be positive");
        return {kappa, 2.0 / (pi * kappa)};
    }
};

inline ReducedParams reduce(const SystemParams& p) {
    p.validate();
    return ReducedParams::from_kappa(2.0 * p.q * p.e * p.m * p.R0 * p.R0 / (p.hbar * p.hbar));
}

/// hbar^2 / (2 m R0^2): one reduced energy unit expressed in hartree.
inline double energy_unit(const SystemParams& p) {
    return p.hbar * p.hbar / (2.0 * p.m * p.R0 * p.R0);
}

inline double physical_energy(double eps, const SystemParams& p) { return eps * energy_unit(p); }

inline double reduced_energy(double E, const SystemParams& p) { return E / energy_unit(p); }

/// Bound-state energy the way the published table computes it from the
/// bound root d: E = -d^2 hbar^2 / (2 pi^2 m R0^2). This carries an extra
/// 1/pi^2 relative to physical_energy(-d^2, p) and exists only to reproduce
/// those printed numbers.
inline double paper_compat_bound_energy(double d, const SystemParams& p) {
    return -d * d * energy_unit(p) / (pi * pi);
}

}  // namespace ringdelta
