// system.hpp — Hamiltonian matrix, normal-mode decomposition, effective bath couplings

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "triosc/errors.hpp"

namespace triosc {

// Parameters of three coupled oscillators: squared frequencies on the diagonal,
// bilinear couplings off it, plus per-oscillator bath coupling weights.
struct SystemParams {
    std::array<double, 3> omega_sq{1.0, 1.0, 1.0}; // w1^2, w2^2, w3^2
    double l12{0.0};
    double l13{0.0};
    double l23{0.0};
    std::array<double, 3> bath_weights{1.0, 1.0, 1.0};

    double weight_sum() const {
        return std::abs(bath_weights[0]) + std::abs(bath_weights[1]) + std::abs(bath_weights[2]);
    }
};

// Orthogonal mode matrix (columns are mode vectors, ascending frequency),
// normal frequencies and effective couplings kappa_n = sum_i g_i F_{in}.
struct NormalModes {
    Eigen::Matrix3d F;
    Eigen::Vector3d Omega;   // ascending
    Eigen::Vector3d kappa;
    double kappa_tol{3e-9};  // 1e-9 * sum of |weights|

    Eigen::Vector3d omega_sq() const { return Omega.array().square(); }
    bool is_free(int n) const { return std::abs(kappa[n]) < kappa_tol; }
    int free_mode_count() const {
        int c = 0;
        for (int n = 0; n < 3; ++n) c += is_free(n) ? 1 : 0;
        return c;
    }
};

struct BathParams {
    double temperature{10.0}; // k_B = 1
    double gamma{0.07};       // system-bath strength
    double cutoff{50.0};      // sharp Ohmic cutoff

    void validate() const {
        if (!(temperature >= 0.0)) throw NonPhysical("BathParams: temperature must be >= 0");
        if (!(gamma > 0.0)) throw NonPhysical("BathParams: gamma must be > 0");
        if (!(cutoff > 0.0)) throw NonPhysical("BathParams: cutoff must be > 0");
    }
};

inline Eigen::Matrix3d assemble_matrix(const SystemParams& p) {
    Eigen::Matrix3d h;
    h << p.omega_sq[0], p.l12, p.l13,
         p.l12, p.omega_sq[1], p.l23,
         p.l13, p.l23, p.omega_sq[2];
    return h;
}

// Builds the 3x3 system matrix and rejects non-attractive potentials.
inline Eigen::Matrix3d build_hamiltonian(const SystemParams& p) {
    for (double w : p.omega_sq)
        if (!std::isfinite(w)) throw NonPhysical("SystemParams: non-finite frequency");
    if (!std::isfinite(p.l12) || !std::isfinite(p.l13) || !std::isfinite(p.l23))
        throw NonPhysical("SystemParams: non-finite coupling");
    const Eigen::Matrix3d h = assemble_matrix(p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw PositivityError("Hamiltonian matrix has a non-positive eigenvalue");
    return h;
}

namespace detail {

// Fix each column sign so its largest-magnitude component is positive, taking
// the first component on (near-)ties. Keeps F reproducible across runs.
inline void fix_column_signs(Eigen::Matrix3d& F) {
    for (int n = 0; n < 3; ++n) {
        double best = 0.0;
        for (int i = 0; i < 3; ++i) best = std::max(best, std::abs(F(i, n)));
        int arg = 0;
        for (int i = 0; i < 3; ++i) {
            if (std::abs(F(i, n)) >= best * (1.0 - 1e-12)) {
                arg = i;
                break;
            }
        }
        if (F(arg, n) < 0.0) F.col(n) = -F.col(n);
    }
}

// Rotate a degenerate eigen-subspace so that at most one of its vectors
// carries the whole bath coupling; the rest become exactly noise-free.
template <int K>
inline void concentrate_coupling(Eigen::Matrix3d& F, int first,
                                 const Eigen::Vector3d& weights, double tol) {
    Eigen::Matrix<double, 3, K> block = F.template block<3, K>(0, first);
    Eigen::Matrix<double, K, 1> k = block.transpose() * weights;
    const double norm = k.norm();
    if (norm < tol) return;
    Eigen::Matrix<double, K, 1> khat = k / norm;
    Eigen::Matrix<double, K, 1> u = khat;
    u(K - 1) -= 1.0;
    Eigen::Matrix<double, K, K> Q = Eigen::Matrix<double, K, K>::Identity();
    const double uu = u.squaredNorm();
    if (uu > 1e-30) Q -= (2.0 / uu) * (u * u.transpose()); // Householder, maps e_K <-> khat
    F.template block<3, K>(0, first) = block * Q;
}

} // namespace detail

// Diagonalizes the system matrix into normal modes. Modes are ordered by
// ascending frequency; inside a degenerate cluster the basis is rotated so
// that the bath couples to a single combination (zero-kappa vectors first).
inline NormalModes normal_modes(const SystemParams& p) {
    const Eigen::Matrix3d h = build_hamiltonian(p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
    Eigen::Vector3d ev = es.eigenvalues();
    Eigen::Matrix3d F = es.eigenvectors();

    const Eigen::Vector3d weights(p.bath_weights[0], p.bath_weights[1], p.bath_weights[2]);
    const double tol = 1e-9 * p.weight_sum();
    const double deg_tol = 1e-9 * ev.maxCoeff();

    int i = 0;
    while (i < 3) {
        int j = i;
        while (j + 1 < 3 && std::abs(ev(j + 1) - ev(i)) < deg_tol) ++j;
        const int k = j - i + 1;
        if (k == 2) detail::concentrate_coupling<2>(F, i, weights, tol);
        if (k == 3) detail::concentrate_coupling<3>(F, i, weights, tol);
        if (k > 1) {
            // order within the cluster by |kappa| ascending
            std::array<int, 3> idx{0, 1, 2};
            Eigen::Matrix3d Fc = F;
            std::sort(idx.begin(), idx.begin() + k, [&](int a, int b) {
                return std::abs((Fc.col(i + a).transpose() * weights).value()) <
                       std::abs((Fc.col(i + b).transpose() * weights).value());
            });
            for (int m = 0; m < k; ++m) F.col(i + m) = Fc.col(i + idx[m]);
        }
        i = j + 1;
    }

    detail::fix_column_signs(F);

    NormalModes nm;
    nm.F = F;
    nm.Omega = ev.array().sqrt();
    nm.kappa = F.transpose() * weights;
    nm.kappa_tol = tol;
    return nm;
}

// Ratio of the two smallest squared effective couplings, R in [0,1].
// Couplings below the NS detection threshold count as exactly zero, so a
// protected mode gives R = 0 identically.
inline double decay_ratio(const NormalModes& m) {
    std::array<double, 3> k2;
    for (int n = 0; n < 3; ++n) {
        const double a = std::abs(m.kappa[n]);
        k2[n] = (a < m.kappa_tol) ? 0.0 : a * a;
    }
    std::sort(k2.begin(), k2.end());
    if (k2[1] == 0.0) return 0.0; // both protected: fully non-dissipative pair
    return k2[0] / k2[1];
}

} // namespace triosc
