// dynamics.hpp — Exact Gaussian propagation under the strong-RWA Markovian
// master equation: per-mode damping/diffusion, closed-form propagator,
// stationary and Gibbs states.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <optional>

#include "triosc/errors.hpp"
#include "triosc/gaussian.hpp"
#include "triosc/system.hpp"

namespace triosc {

// coth(x/(2T)) with the T = 0 limit handled exactly.
inline double thermal_coth(double omega, double temperature) {
    if (temperature <= 0.0) return 1.0;
    return 1.0 / std::tanh(omega / (2.0 * temperature));
}

// Per-mode master-equation coefficients. Gamma_n = gamma kappa_n^2,
// D_n = gamma kappa_n^2 Omega_n coth(Omega_n / 2T). Modes with kappa below the
// NS threshold are exactly free: no damping, no diffusion, no stationary block.
struct MmeCoefficients {
    Eigen::Vector3d Gamma{Eigen::Vector3d::Zero()};
    Eigen::Vector3d D{Eigen::Vector3d::Zero()};
    Eigen::Vector3d Omega{Eigen::Vector3d::Ones()};
    std::array<bool, 3> free_mode{false, false, false};
    std::array<std::optional<Eigen::Matrix2d>, 3> stationary;

    Eigen::Matrix2d drift_block(int n) const {
        Eigen::Matrix2d A;
        A << -Gamma[n] / 2.0, 1.0, -Omega[n] * Omega[n], -Gamma[n] / 2.0;
        return A;
    }
    Eigen::Matrix2d diffusion_block(int n) const {
        Eigen::Matrix2d Df = Eigen::Matrix2d::Zero();
        Df(0, 0) = D[n] / (2.0 * Omega[n] * Omega[n]);
        Df(1, 1) = D[n] / 2.0;
        return Df;
    }

    // assembled 6x6 blocks in (Q1..Q3,P1..P3) ordering
    Matrix6 drift() const {
        Matrix6 A = Matrix6::Zero();
        for (int n = 0; n < 3; ++n) {
            A(n, n) = A(n + 3, n + 3) = -Gamma[n] / 2.0;
            A(n, n + 3) = 1.0;
            A(n + 3, n) = -Omega[n] * Omega[n];
        }
        return A;
    }
    Matrix6 diffusion() const {
        Matrix6 Df = Matrix6::Zero();
        for (int n = 0; n < 3; ++n) {
            Df(n, n) = D[n] / (2.0 * Omega[n] * Omega[n]);
            Df(n + 3, n + 3) = D[n] / 2.0;
        }
        return Df;
    }
    // stationary covariance with zero blocks for free modes
    Matrix6 stationary_cov() const {
        Matrix6 V = Matrix6::Zero();
        for (int n = 0; n < 3; ++n) {
            if (!stationary[n]) continue;
            V(n, n) = (*stationary[n])(0, 0);
            V(n + 3, n + 3) = (*stationary[n])(1, 1);
        }
        return V;
    }
};

inline MmeCoefficients mme_coefficients(const NormalModes& modes, const BathParams& bath) {
    bath.validate();
    for (int n = 0; n < 3; ++n)
        if (modes.Omega[n] >= bath.cutoff)
            throw CutoffViolation("mme_coefficients: normal frequency at or above the bath cutoff");

    MmeCoefficients c;
    c.Omega = modes.Omega;
    for (int n = 0; n < 3; ++n) {
        if (modes.is_free(n)) {
            c.free_mode[n] = true;
            continue; // Gamma = D = 0, stationary block absent
        }
        const double k2 = modes.kappa[n] * modes.kappa[n];
        c.Gamma[n] = bath.gamma * k2;
        const double coth = thermal_coth(modes.Omega[n], bath.temperature);
        c.D[n] = bath.gamma * k2 * modes.Omega[n] * coth;
        Eigen::Matrix2d V;
        V << coth / (2.0 * modes.Omega[n]), 0.0, 0.0, modes.Omega[n] * coth / 2.0;
        c.stationary[n] = V;
    }
    return c;
}

namespace detail {

// exp(A t) assembled per mode: exp(-G t/2) [[cos, sin/Om],[-Om sin, cos]]
inline Matrix6 propagator(const MmeCoefficients& c, double t) {
    Matrix6 E = Matrix6::Zero();
    for (int n = 0; n < 3; ++n) {
        const double damp = std::exp(-c.Gamma[n] * t / 2.0);
        const double w = c.Omega[n];
        const double co = damp * std::cos(w * t);
        const double si = damp * std::sin(w * t);
        E(n, n) = E(n + 3, n + 3) = co;
        E(n, n + 3) = si / w;
        E(n + 3, n) = -w * si;
    }
    return E;
}

} // namespace detail

// Closed-form propagation: mean(t) = e^{At} mean(0),
// cov(t) = e^{At} (cov(0) - Vinf) e^{A^T t} + Vinf, with Vinf absent (zero) on
// free-mode blocks so protected modes rotate unitarily.
inline GaussianState propagate(const GaussianState& state, const MmeCoefficients& coeffs,
                               double t) {
    if (state.basis != BasisTag::normal)
        throw BasisMismatch("propagate: state must be in the normal-mode basis");
    if (!(t >= 0.0)) throw Error("propagate: time must be >= 0");
    const Matrix6 E = detail::propagator(coeffs, t);
    const Matrix6 Vinf = coeffs.stationary_cov();
    GaussianState out;
    out.basis = BasisTag::normal;
    out.mean = E * state.mean;
    out.cov = E * (state.cov - Vinf) * E.transpose() + Vinf;
    out.cov = ((out.cov + out.cov.transpose()) / 2.0).eval();
    return out;
}

// Gibbs state of all normal modes at the bath temperature (free modes included);
// used as the full-thermalization reference.
inline GaussianState thermal_state(const NormalModes& modes, const BathParams& bath) {
    bath.validate();
    GaussianState s;
    s.basis = BasisTag::normal;
    for (int n = 0; n < 3; ++n) {
        const double w = modes.Omega[n];
        const double coth = thermal_coth(w, bath.temperature);
        s.cov(n, n) = coth / (2.0 * w);
        s.cov(n + 3, n + 3) = w * coth / 2.0;
    }
    return s;
}

} // namespace triosc
