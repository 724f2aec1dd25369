// gaussian.hpp — Gaussian states of the three-mode chain: means, covariances,
// basis transforms, symplectic spectra.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>

#include "triosc/errors.hpp"
#include "triosc/system.hpp"

namespace triosc {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

enum class BasisTag { natural, normal };

// State ordering is (q1,q2,q3,p1,p2,p3) in the natural basis and
// (Q1,Q2,Q3,P1,P2,P3) in the normal-mode basis. hbar = 1, vacuum q-variance 1/(2w).
struct GaussianState {
    BasisTag basis{BasisTag::natural};
    Vector6 mean{Vector6::Zero()};
    Matrix6 cov{Matrix6::Zero()};
};

inline Matrix6 symplectic_form6() {
    Matrix6 J = Matrix6::Zero();
    J.block<3, 3>(0, 3) = Eigen::Matrix3d::Identity();
    J.block<3, 3>(3, 0) = -Eigen::Matrix3d::Identity();
    return J;
}

// Symplectic eigenvalues of a covariance matrix (raw convention: vacuum -> 1/2),
// ascending. Computed from the spectrum of J V.
inline std::array<double, 3> symplectic_eigenvalues(const Matrix6& cov) {
    Eigen::EigenSolver<Matrix6> es(symplectic_form6() * cov, false);
    std::array<double, 6> im;
    for (int i = 0; i < 6; ++i) im[i] = std::abs(es.eigenvalues()[i].imag());
    std::sort(im.begin(), im.end());
    return {im[1], im[3], im[5]}; // each value appears twice
}

// Uncertainty-relation check: all symplectic eigenvalues >= 1/2 within slack.
inline bool is_physical(const Matrix6& cov, double slack = 1e-9) {
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff()))
        return false;
    for (double nu : symplectic_eigenvalues(cov))
        if (nu < 0.5 - slack) return false;
    return true;
}

// Separable squeezed vacuum of the natural oscillators:
// <q_i^2> = e^{-2 r_i}/(2 w_i), <p_i^2> = w_i e^{2 r_i}/2, everything else zero.
inline GaussianState squeezed_vacuum(const std::array<double, 3>& omega_sq,
                                     const std::array<double, 3>& r) {
    GaussianState s;
    s.basis = BasisTag::natural;
    for (int i = 0; i < 3; ++i) {
        if (!(omega_sq[i] > 0.0))
            throw NonPhysical("squeezed_vacuum: omega_sq must be positive");
        const double w = std::sqrt(omega_sq[i]);
        s.cov(i, i) = std::exp(-2.0 * r[i]) / (2.0 * w);
        s.cov(i + 3, i + 3) = w * std::exp(2.0 * r[i]) / 2.0;
    }
    return s;
}

// Canonical transformation between natural and normal-mode coordinates:
// q = F Q, p = F P, so natural -> normal applies blockdiag(F^T, F^T).
inline GaussianState change_basis(const GaussianState& state, const NormalModes& modes,
                                  BasisTag to) {
    if (state.basis == to)
        throw BasisMismatch("change_basis: state already in the requested basis");
    Eigen::Matrix3d B = (to == BasisTag::normal) ? modes.F.transpose() : modes.F;
    Matrix6 S = Matrix6::Zero();
    S.block<3, 3>(0, 0) = B;
    S.block<3, 3>(3, 3) = B;
    GaussianState out;
    out.basis = to;
    out.mean = S * state.mean;
    out.cov = S * state.cov * S.transpose();
    return out;
}

} // namespace triosc
