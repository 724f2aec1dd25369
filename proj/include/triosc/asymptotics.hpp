// asymptotics.hpp — Closed forms for the asymptotic state of protected chains:
// bath-weighted sigma coefficients, critical squeezings, the one-mode
// entanglement law and phases, and the two-mode minimum symplectic eigenvalue.

#pragma once

#include <algorithm>
#include <cmath>

#include "triosc/dynamics.hpp"
#include "triosc/errors.hpp"

namespace triosc {

enum class Phase { SD, SDR, NSD };

inline const char* to_string(Phase p) {
    switch (p) {
        case Phase::SD: return "SD";
        case Phase::SDR: return "SDR";
        default: return "NSD";
    }
}

// Asymptotic phase from the minimum entanglement E0 and oscillation amplitude:
// no sudden death when the minimum stays positive, revivals while the maximum
// E0 + 2 dE does. Boundaries go to the less-entangled phase.
inline Phase phase_classify(double e0, double delta_e) {
    if (e0 > 0.0) return Phase::NSD;
    if (e0 + 2.0 * delta_e > 0.0) return Phase::SDR;
    return Phase::SD;
}

// ------------------------------- one-mode NS --------------------------------

// Symmetric open chain (w1 = w3 = w, l12 = l23 = lambda, l13 = 0) with the
// antisymmetric mode protected. Stores the dissipative-mode frequencies and
// their squared shape components on an external oscillator (c_sq sums to 1/2).
struct OneModeNsSpec {
    double omega{1.0};
    double omega2{1.2};
    double lambda{0.6};
    double omega_plus{0.0};
    double omega_minus{0.0};
    double c_plus_sq{0.0};  // F_{1,+}^2 = lambda^2 / (2 lambda^2 + (Om+^2 - w^2)^2)
    double c_minus_sq{0.0};

    static OneModeNsSpec make(double omega, double omega2, double lambda) {
        if (!(omega > 0.0) || !(omega2 > 0.0))
            throw NonPhysical("OneModeNsSpec: frequencies must be positive");
        if (lambda == 0.0)
            throw NonPhysical("OneModeNsSpec: lambda must be nonzero (uncoupled chain)");
        OneModeNsSpec s;
        s.omega = omega;
        s.omega2 = omega2;
        s.lambda = lambda;
        const double w2 = omega * omega, w22 = omega2 * omega2;
        const double eps = (w22 - w2) * (w22 - w2) / 4.0 + 2.0 * lambda * lambda;
        const double op2 = (w22 + w2) / 2.0 + std::sqrt(eps);
        const double om2 = (w22 + w2) / 2.0 - std::sqrt(eps);
        if (!(om2 > 0.0)) throw NonPhysical("OneModeNsSpec: lower dissipative mode not bound");
        s.omega_plus = std::sqrt(op2);
        s.omega_minus = std::sqrt(om2);
        s.c_plus_sq = lambda * lambda / (2.0 * lambda * lambda + (op2 - w2) * (op2 - w2));
        s.c_minus_sq = lambda * lambda / (2.0 * lambda * lambda + (om2 - w2) * (om2 - w2));
        return s;
    }
};

struct SigmaCoefficients {
    double sigma_q{0.0};
    double sigma_p{0.0};
};

// coth-weighted sums over the dissipative modes; they fix the thermal variances
// of the virtual oscillator (q1 + q3)/sqrt(2).
inline SigmaCoefficients sigma_coefficients(const OneModeNsSpec& s, double T) {
    const double l2 = s.lambda * s.lambda;
    const double cp = s.c_plus_sq / l2;  // paper-normalization c^2
    const double cm = s.c_minus_sq / l2;
    const double cothp = thermal_coth(s.omega_plus, T);
    const double cothm = thermal_coth(s.omega_minus, T);
    SigmaCoefficients out;
    out.sigma_q = s.omega / 2.0 * (cp * cothp / s.omega_plus + cm * cothm / s.omega_minus);
    out.sigma_p = (cp * s.omega_plus * cothp + cm * s.omega_minus * cothm) / (2.0 * s.omega);
    return out;
}

struct CriticalSqueezings {
    double r0_plus{0.0};
    double r0_minus{0.0};
    double r_c{0.0};
};

// r0+ = ln(4 lambda^2 sigma_Q)/2, r0- = -ln(4 lambda^2 sigma_P)/2, rc = (r0+ + r0-)/4.
inline CriticalSqueezings critical_squeezings(const OneModeNsSpec& s, double T) {
    const auto sig = sigma_coefficients(s, T);
    CriticalSqueezings c;
    c.r0_plus = 0.5 * std::log(4.0 * s.lambda * s.lambda * sig.sigma_q);
    c.r0_minus = -0.5 * std::log(4.0 * s.lambda * s.lambda * sig.sigma_p);
    c.r_c = (c.r0_plus + c.r0_minus) / 4.0;
    return c;
}

// Exact asymptotic nu-(t) for the external pair (initial squeezing r1 = r3 = r):
//   nu^2 = 2 lambda^2 (y - sqrt(y^2 - 4 sigma_P sigma_Q)), y = G0 + G1 cos(2 w t).
inline double one_mode_nu(const OneModeNsSpec& s, double r, double T, double t) {
    const auto sig = sigma_coefficients(s, T);
    const double g0 = (sig.sigma_q + sig.sigma_p) * std::cosh(2.0 * r);
    const double g1 = (sig.sigma_q - sig.sigma_p) * std::sinh(2.0 * r);
    const double y = g0 + g1 * std::cos(2.0 * s.omega * t);
    const double rad = std::max(y * y - 4.0 * sig.sigma_p * sig.sigma_q, 0.0);
    return std::sqrt(2.0 * s.lambda * s.lambda * (y - std::sqrt(rad)));
}

struct EntanglementLaw {
    double e0{0.0};      // minimum entanglement
    double delta_e{0.0}; // E_N(t) = max{0, e0 + delta_e (1 + cos 2 w t)}
};

// Two squeezing regimes split at r = 2 rc. Above it the initial squeezing is
// the entanglement resource (E in [r - r0+, r + r0-]); below it the bath
// squeezes the virtual oscillator (E in [r0- - r, r0- + r], so delta_e = r).
inline EntanglementLaw one_mode_entanglement_law(const OneModeNsSpec& s, double r, double T) {
    const auto c = critical_squeezings(s, T);
    EntanglementLaw law;
    if (r >= 2.0 * c.r_c) {
        law.e0 = r - c.r0_plus;
        law.delta_e = 2.0 * c.r_c;
    } else {
        law.e0 = c.r0_minus - r;
        law.delta_e = r;
    }
    return law;
}

inline double one_mode_entanglement(const OneModeNsSpec& s, double r, double T, double t) {
    const EntanglementLaw law = one_mode_entanglement_law(s, r, T);
    return std::max(0.0, law.e0 + law.delta_e * (1.0 + std::cos(2.0 * s.omega * t)));
}

// ------------------------------- two-mode NS --------------------------------

// Symmetric open chain with lambda = w^2 - w2^2: only the center of mass
// dissipates. Valid while both 2 w2^2 > w^2 and 2 w^2 > w2^2.
struct TwoModeNsSpec {
    double omega{1.3};
    double omega2{1.0};
    double lambda0{0.0};
    double omega_eps{0.0};
    double omega_cm{0.0};

    static TwoModeNsSpec make(double omega, double omega2) {
        if (!(omega > 0.0) || !(omega2 > 0.0))
            throw NonPhysical("TwoModeNsSpec: frequencies must be positive");
        const double w2 = omega * omega, w22 = omega2 * omega2;
        if (!(2.0 * w22 > w2) || !(2.0 * w2 > w22))
            throw RegimeError("TwoModeNsSpec: outside the validity window 2 w2^2 > w^2 > w2^2/2");
        TwoModeNsSpec s;
        s.omega = omega;
        s.omega2 = omega2;
        s.lambda0 = w2 - w22;
        s.omega_eps = std::sqrt(2.0 * w22 - w2);
        s.omega_cm = std::sqrt(2.0 * w2 - w22);
        return s;
    }
};

// Center-of-mass-only sigma coefficients of the two-mode configuration.
inline SigmaCoefficients sigma_coefficients(const TwoModeNsSpec& s, double T) {
    const double coth = thermal_coth(s.omega_cm, T);
    SigmaCoefficients out;
    out.sigma_p = s.omega_cm / (6.0 * s.omega) * coth;
    out.sigma_q = s.omega / (6.0 * s.omega_cm) * coth;
    return out;
}

namespace detail {

// Amplitudes of the quasi-periodic nu-(t) expression on the (2wt, 2 Oeps t)
// torus: A = a0 + a1 cos th1 + a2 cos th2 + a3 cos(th2-th1) + a4 cos(th2+th1),
// B = b0 + b1 cos th2, and 2 nu^2 = A - sqrt(A^2 - B).
struct TwoModeNuTerms {
    double a0, a1, a2, a3, a4, b0, b1;
};

inline TwoModeNuTerms two_mode_nu_terms(const TwoModeNsSpec& s, double r, double T) {
    const auto sig = sigma_coefficients(s, T);
    const double w = s.omega, w2 = s.omega2, oe = s.omega_eps;
    const double oe2 = oe * oe, ww = w * w;
    const double jp = (std::exp(2.0 * r) * (2.0 * w2 + w) / oe2 +
                       std::exp(-2.0 * r) * (2.0 * w + w2) / (w * w2)) / (12.0 * w);
    const double jm = (std::exp(2.0 * r) * (2.0 * w2 + w) / oe2 -
                       std::exp(-2.0 * r) * (2.0 * w + w2) / (w * w2)) / (12.0 * w);
    const double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
    TwoModeNuTerms t{};
    t.a0 = 4.0 * (sig.sigma_q + sig.sigma_p) * ch + (2.0 / 3.0) * jp * ch * (oe2 + ww);
    t.a1 = 4.0 * (sig.sigma_q - sig.sigma_p) * sh - (2.0 / 3.0) * jp * sh * (oe2 - ww);
    t.a2 = (2.0 / 3.0) * jm * ch * (oe2 - ww);
    t.a3 = -(jm * sh / 3.0) * (oe + w) * (oe + w);
    t.a4 = -(jm * sh / 3.0) * (oe - w) * (oe - w);
    t.b0 = 64.0 * sig.sigma_p * sig.sigma_q +
           4.0 * (2.0 * w + w2) * (2.0 * w2 + w) / (81.0 * w * w2) +
           (32.0 / 3.0) * jp * (oe2 * sig.sigma_q + ww * sig.sigma_p);
    t.b1 = (32.0 / 3.0) * jm * (oe2 * sig.sigma_q - ww * sig.sigma_p);
    return t;
}

inline double two_mode_nu_eval(const TwoModeNuTerms& t, double th1, double th2) {
    const double A = t.a0 + t.a1 * std::cos(th1) + t.a2 * std::cos(th2) +
                     t.a3 * std::cos(th2 - th1) + t.a4 * std::cos(th2 + th1);
    const double B = t.b0 + t.b1 * std::cos(th2);
    const double val = A - std::sqrt(std::max(A * A - B, 0.0));
    return std::sqrt(std::max(val, 0.0) / 2.0);
}

} // namespace detail

// Exact asymptotic nu-(t) of the external pair when every oscillator starts
// with the same squeezing r.
inline double two_mode_nu(const TwoModeNsSpec& s, double r, double T, double t) {
    const auto terms = detail::two_mode_nu_terms(s, r, T);
    return detail::two_mode_nu_eval(terms, 2.0 * s.omega * t, 2.0 * s.omega_eps * t);
}

struct NuRange {
    double nu_min{0.0};
    double nu_max{0.0};
};

// Extremes of nu-(t) over all times, taken as extremes over the phase torus
// (exact for incommensurate mode frequencies). For each th2 the th1 extremes
// are available in closed form, so a one-dimensional scan suffices.
inline NuRange two_mode_nu_range(const TwoModeNsSpec& s, double r, double T, int grid = 4096) {
    const auto t = detail::two_mode_nu_terms(s, r, T);
    NuRange out{1e300, 0.0};
    for (int k = 0; k < grid; ++k) {
        const double th2 = 2.0 * M_PI * k / grid;
        // A(th1 | th2) = C + X cos th1 + Y sin th1
        const double C = t.a0 + t.a2 * std::cos(th2);
        const double X = t.a1 + (t.a3 + t.a4) * std::cos(th2);
        const double Y = (t.a3 - t.a4) * std::sin(th2);
        const double R = std::hypot(X, Y);
        const double B = t.b0 + t.b1 * std::cos(th2);
        for (double A : {C - R, C + R}) {
            const double val = A - std::sqrt(std::max(A * A - B, 0.0));
            const double nu = std::sqrt(std::max(val, 0.0) / 2.0);
            out.nu_min = std::min(out.nu_min, nu);
            out.nu_max = std::max(out.nu_max, nu);
        }
    }
    return out;
}

// Minimum entanglement and oscillation amplitude of a two-mode configuration,
// from numeric extremization of nu-(t).
inline EntanglementLaw two_mode_entanglement_law(const TwoModeNsSpec& s, double r, double T,
                                                 int grid = 4096) {
    const NuRange range = two_mode_nu_range(s, r, T, grid);
    EntanglementLaw law;
    law.e0 = -std::log(range.nu_max);
    law.delta_e = 0.5 * std::log(range.nu_max / range.nu_min);
    return law;
}

} // namespace triosc
