// test_support.hpp — Shared oracles and generators for the test suites:
// random bound systems, an RK4 moment integrator, random two-mode Gaussian
// states, a Gaussian-measurement minimizer for discord, and the direct
// asymptotic-state constructions the closed forms are checked against.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "triosc/correlations.hpp"
#include "triosc/dynamics.hpp"
#include "triosc/gaussian.hpp"
#include "triosc/system.hpp"

namespace triosc::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Random parameters rejected until the potential is bound.
inline SystemParams random_bound_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> wdist(0.5, 3.0);
    std::uniform_real_distribution<double> ldist(-0.5, 0.5);
    for (;;) {
        SystemParams p;
        p.omega_sq = {wdist(rng), wdist(rng), wdist(rng)};
        p.l12 = ldist(rng);
        p.l13 = ldist(rng);
        p.l23 = ldist(rng);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(assemble_matrix(p),
                                                          Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() > 1e-3) return p;
    }
}

// Direct eigensolve of the assembled matrix; independent of normal_modes'
// ordering, degeneracy and sign conventions.
struct DirectModes {
    Eigen::Vector3d eigenvalues;
    Eigen::Matrix3d vectors;
    Eigen::Vector3d kappa;
};

inline DirectModes direct_diagonalize(const SystemParams& p) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(assemble_matrix(p));
    DirectModes d;
    d.eigenvalues = es.eigenvalues();
    d.vectors = es.eigenvectors();
    const Eigen::Vector3d g(p.bath_weights[0], p.bath_weights[1], p.bath_weights[2]);
    d.kappa = d.vectors.transpose() * g;
    return d;
}

// Smallest |kappa| over the eigenbasis, rotating degenerate subspaces to their
// most protected combination (a zero-sum combination always exists there).
inline double oracle_min_abs_kappa(const SystemParams& p) {
    const DirectModes d = direct_diagonalize(p);
    double best = std::abs(d.kappa[0]);
    for (int i = 0; i < 3; ++i) {
        best = std::min(best, std::abs(d.kappa[i]));
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(d.eigenvalues[i] - d.eigenvalues[j]) <
                1e-9 * d.eigenvalues.maxCoeff())
                return 0.0;
    }
    return best;
}

// Fourth-order Runge-Kutta integration of the moment equations
//   dm/dt = A m,  dV/dt = A V + V A^T + Diff
// sampling the state at the requested checkpoint times (ascending).
struct Rk4Result {
    std::vector<Vector6> means;
    std::vector<Matrix6> covs;
};

inline Rk4Result rk4_moments(const GaussianState& initial, const Matrix6& A,
                             const Matrix6& Diff, const std::vector<double>& checkpoints,
                             double dt) {
    Rk4Result out;
    Vector6 m = initial.mean;
    Matrix6 V = initial.cov;
    double t = 0.0;
    auto dV = [&](const Matrix6& X) -> Matrix6 { return A * X + X * A.transpose() + Diff; };
    for (double target : checkpoints) {
        while (t < target - 1e-12) {
            const double h = std::min(dt, target - t);
            const Vector6 k1 = A * m;
            const Vector6 k2 = A * (m + 0.5 * h * k1);
            const Vector6 k3 = A * (m + 0.5 * h * k2);
            const Vector6 k4 = A * (m + h * k3);
            const Matrix6 K1 = dV(V);
            const Matrix6 K2 = dV(V + 0.5 * h * K1);
            const Matrix6 K3 = dV(V + 0.5 * h * K2);
            const Matrix6 K4 = dV(V + h * K3);
            m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            V += h / 6.0 * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
            t += h;
        }
        out.means.push_back(m);
        out.covs.push_back(V);
    }
    return out;
}

// ----------------------- random two-mode Gaussian states ---------------------

inline Eigen::Matrix2d rotation2(double a) {
    Eigen::Matrix2d R;
    R << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
    return R;
}

inline Eigen::Matrix2d random_local_symplectic(std::mt19937_64& rng, double max_squeeze = 0.8) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> sq(-max_squeeze, max_squeeze);
    const double z = sq(rng);
    return rotation2(ang(rng)) * Eigen::Vector2d(std::exp(z), std::exp(-z)).asDiagonal() *
           rotation2(ang(rng));
}

// Random physical pair covariance (raw units, vacuum 1/2): random symplectic
// conjugation of a two-mode thermal diagonal.
inline PairCovariance random_pair_state(std::mt19937_64& rng, double max_nu = 2.5) {
    std::uniform_real_distribution<double> nu(0.5, max_nu);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
    S.block<2, 2>(0, 0) = random_local_symplectic(rng);
    S.block<2, 2>(2, 2) = random_local_symplectic(rng);
    const double th = ang(rng);
    Eigen::Matrix4d BS = Eigen::Matrix4d::Identity() * std::cos(th);
    BS.block<2, 2>(0, 2) = std::sin(th) * Eigen::Matrix2d::Identity();
    BS.block<2, 2>(2, 0) = -std::sin(th) * Eigen::Matrix2d::Identity();
    Eigen::Matrix4d L2 = Eigen::Matrix4d::Zero();
    L2.block<2, 2>(0, 0) = random_local_symplectic(rng);
    L2.block<2, 2>(2, 2) = random_local_symplectic(rng);
    S = S * BS * L2;
    const double n1 = nu(rng), n2 = nu(rng);
    PairCovariance pc;
    pc.V = S * Eigen::Vector4d(n1, n1, n2, n2).asDiagonal() * S.transpose();
    return pc;
}

// ----------------- discord oracle: measurement minimization ------------------

// Minimum conditional determinant over single-mode Gaussian measurements with
// pure seed R diag(m, 1/m) R^T on the measured party, by a coarse grid plus a
// shrinking local search. Works in the rescaled (vacuum -> 1) units.
inline double discord_measurement_oracle(const PairCovariance& pc,
                                         MeasuredParty mp = MeasuredParty::B) {
    Eigen::Matrix4d Vp = 2.0 * pc.V;
    Eigen::Matrix2d al = Vp.block<2, 2>(0, 0);
    Eigen::Matrix2d be = Vp.block<2, 2>(2, 2);
    Eigen::Matrix2d ga = Vp.block<2, 2>(0, 2);
    if (mp == MeasuredParty::A) {
        std::swap(al, be);
        ga = Vp.block<2, 2>(2, 0).eval();
    }
    auto cond_det = [&](double theta, double logm) {
        const Eigen::Matrix2d R = rotation2(theta);
        const double m = std::pow(10.0, logm);
        const Eigen::Matrix2d seed = R * Eigen::Vector2d(m, 1.0 / m).asDiagonal() * R.transpose();
        const Eigen::Matrix2d cond = al - ga * (be + seed).inverse() * ga.transpose();
        return cond.determinant();
    };

    double best = 1e300, best_t = 0.0, best_l = 0.0;
    for (int it = 0; it < 180; ++it)
        for (int il = 0; il <= 120; ++il) {
            const double th = M_PI * it / 180.0;
            const double lm = -3.0 + 6.0 * il / 120.0;
            const double v = cond_det(th, lm);
            if (v < best) {
                best = v;
                best_t = th;
                best_l = lm;
            }
        }
    double dth = M_PI / 180.0, dlm = 6.0 / 120.0;
    for (int round = 0; round < 60; ++round) {
        bool improved = false;
        for (int a = -3; a <= 3; ++a)
            for (int b = -3; b <= 3; ++b) {
                const double th = best_t + a * dth / 3.0;
                const double lm = best_l + b * dlm / 3.0;
                const double v = cond_det(th, lm);
                if (v < best) {
                    best = v;
                    best_t = th;
                    best_l = lm;
                    improved = true;
                }
            }
        if (!improved) {
            dth /= 3.0;
            dlm /= 3.0;
        }
    }

    const double A = al.determinant(), B = be.determinant(), D = Vp.determinant();
    const double Delta = A + B + 2.0 * ga.determinant();
    const double disc = std::sqrt(std::max(Delta * Delta - 4.0 * D, 0.0));
    const double nu_p = std::sqrt(std::max((Delta + disc) / 2.0, 1.0));
    const double nu_m = std::sqrt(std::max((Delta - disc) / 2.0, 1.0));
    auto f = [](double x) {
        x = std::max(x, 1.0);
        const double hi = (x + 1.0) / 2.0, lo = (x - 1.0) / 2.0;
        return hi * std::log(hi) - (lo > 0.0 ? lo * std::log(lo) : 0.0);
    };
    return std::max(0.0, f(std::sqrt(B)) - f(nu_p) - f(nu_m) + f(std::sqrt(std::max(best, 1.0))));
}

// ------------------- direct asymptotic-state constructions -------------------

inline Eigen::Matrix2d free_mode_cov(double q0, double p0, double omega, double t) {
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    Eigen::Matrix2d V;
    const double qq = q0 * c * c + p0 * s * s / (omega * omega);
    const double pp = p0 * c * c + omega * omega * q0 * s * s;
    const double qp = (p0 / omega - omega * q0) * c * s;
    V << qq, qp, qp, pp;
    return V;
}

// Asymptotic pair-(1,3) covariance of the symmetric open chain with one
// protected mode: free antisymmetric mode plus thermalized symmetric modes,
// from a direct eigensolve. Initial squeezing r on both external oscillators.
inline PairCovariance one_mode_asymptotic_pair(double omega, double omega2, double lambda,
                                               double r, double T, double t) {
    SystemParams p;
    p.omega_sq = {omega * omega, omega2 * omega2, omega * omega};
    p.l12 = p.l23 = lambda;
    const DirectModes d = direct_diagonalize(p);

    const Eigen::Matrix2d Vfree =
        free_mode_cov(std::exp(-2.0 * r) / (2.0 * omega), omega * std::exp(2.0 * r) / 2.0,
                      omega, t);
    Eigen::Matrix2d al = Eigen::Matrix2d::Zero(), ga = Eigen::Matrix2d::Zero();
    for (int n = 0; n < 3; ++n) {
        Eigen::Matrix2d Vn;
        if (std::abs(d.kappa[n]) < 1e-9) {
            Vn = Vfree;
        } else {
            const double w = std::sqrt(d.eigenvalues[n]);
            const double coth = thermal_coth(w, T);
            Vn = Eigen::Vector2d(coth / (2.0 * w), w * coth / 2.0).asDiagonal();
        }
        al += d.vectors(0, n) * d.vectors(0, n) * Vn;
        ga += d.vectors(0, n) * d.vectors(2, n) * Vn;
    }
    PairCovariance pc;
    pc.V.block<2, 2>(0, 0) = al;
    pc.V.block<2, 2>(2, 2) = al;
    pc.V.block<2, 2>(0, 2) = ga;
    pc.V.block<2, 2>(2, 0) = ga.transpose();
    return pc;
}

// Same construction for the two-mode configuration (lambda = w^2 - w2^2): free
// antisymmetric and breathing modes, thermal center of mass, equal squeezing r.
inline PairCovariance two_mode_asymptotic_pair(double omega, double omega2, double r, double T,
                                               double t) {
    const double oe = std::sqrt(2.0 * omega2 * omega2 - omega * omega);
    const double ocm = std::sqrt(2.0 * omega * omega - omega2 * omega2);
    const Eigen::Matrix2d Vd =
        free_mode_cov(std::exp(-2.0 * r) / (2.0 * omega), omega * std::exp(2.0 * r) / 2.0,
                      omega, t);
    const double e0q = (2.0 * omega + omega2) * std::exp(-2.0 * r) / (6.0 * omega * omega2);
    const double e0p = (2.0 * omega2 + omega) * std::exp(2.0 * r) / 6.0;
    const Eigen::Matrix2d Ve = free_mode_cov(e0q, e0p, oe, t);
    const double coth = thermal_coth(ocm, T);
    const Eigen::Matrix2d Vc =
        Eigen::Vector2d(coth / (2.0 * ocm), ocm * coth / 2.0).asDiagonal();

    const Eigen::Matrix2d al = 0.5 * Vd + Ve / 6.0 + Vc / 3.0;
    const Eigen::Matrix2d ga = -0.5 * Vd + Ve / 6.0 + Vc / 3.0;
    PairCovariance pc;
    pc.V.block<2, 2>(0, 0) = al;
    pc.V.block<2, 2>(2, 2) = al;
    pc.V.block<2, 2>(0, 2) = ga;
    pc.V.block<2, 2>(2, 0) = ga.transpose();
    return pc;
}

} // namespace triosc::testing
