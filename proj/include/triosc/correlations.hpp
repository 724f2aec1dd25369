// correlations.hpp — Bipartite reductions and measures: minimum symplectic
// eigenvalue of the partial transpose, logarithmic negativity, Gaussian discord.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>

#include "triosc/errors.hpp"
#include "triosc/gaussian.hpp"

namespace triosc {

// Two-mode covariance in (q_A, p_A, q_B, p_B) ordering.
struct PairCovariance {
    Eigen::Matrix4d V{Eigen::Matrix4d::Zero()};

    Eigen::Matrix2d alpha() const { return V.block<2, 2>(0, 0); }
    Eigen::Matrix2d beta() const { return V.block<2, 2>(2, 2); }
    Eigen::Matrix2d gamma_block() const { return V.block<2, 2>(0, 2); }
};

// Raw symplectic eigenvalues of a 4x4 covariance (vacuum -> 1/2), ascending.
inline std::array<double, 2> pair_symplectic_eigenvalues(const Eigen::Matrix4d& V) {
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    J(0, 1) = 1.0; J(1, 0) = -1.0; J(2, 3) = 1.0; J(3, 2) = -1.0;
    Eigen::EigenSolver<Eigen::Matrix4d> es(J * V, false);
    std::array<double, 4> im;
    for (int i = 0; i < 4; ++i) im[i] = std::abs(es.eigenvalues()[i].imag());
    std::sort(im.begin(), im.end());
    return {im[1], im[3]};
}

inline bool pair_is_physical(const Eigen::Matrix4d& V, double slack = 1e-9) {
    return pair_symplectic_eigenvalues(V)[0] >= 0.5 - slack;
}

// Extracts the (q_i, p_i, q_j, p_j) covariance of oscillators i, j (1-based)
// from a natural-basis state.
inline PairCovariance reduce_pair(const GaussianState& state, int i, int j) {
    if (state.basis != BasisTag::natural)
        throw BasisMismatch("reduce_pair: state must be in the natural basis");
    if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
        throw IndexError("reduce_pair: indices must be distinct and in {1,2,3}");
    const int a = i - 1, b = j - 1;
    const std::array<int, 4> idx{a, a + 3, b, b + 3};
    PairCovariance pc;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) pc.V(r, c) = state.cov(idx[r], idx[c]);
    return pc;
}

// Minimum symplectic eigenvalue of the partially transposed covariance, in the
// convention where the vacuum gives 1:
//   nu- = sqrt( (a + b - 2g - sqrt((a+b-2g)^2 - 4s)) / 2 )
// with a = 4 det(alpha), b = 4 det(beta), g = 4 det(gamma), s = 16 det V.
inline double min_symplectic_eig(const PairCovariance& pc) {
    const double a = 4.0 * pc.alpha().determinant();
    const double b = 4.0 * pc.beta().determinant();
    const double g = 4.0 * pc.gamma_block().determinant();
    const double s = 16.0 * pc.V.determinant();
    const double d = a + b - 2.0 * g;
    double inner = d * d - 4.0 * s;
    if (inner < -1e-12) throw NumericalError("min_symplectic_eig: negative inner radicand");
    inner = std::max(inner, 0.0);
    if (d <= 0.0) {
        if (d < -1e-12) throw NumericalError("min_symplectic_eig: negative squared eigenvalue");
        return 0.0;
    }
    // (d - sqrt(inner)) / 2 rewritten to avoid cancellation for small nu
    const double outer = 2.0 * s / (d + std::sqrt(inner));
    if (outer < -1e-12) throw NumericalError("min_symplectic_eig: negative squared eigenvalue");
    return std::sqrt(std::max(outer, 0.0));
}

// E_N = max{0, -ln nu-} (natural logarithm).
inline double log_negativity(double nu_minus) {
    if (!(nu_minus > 0.0)) throw NumericalError("log_negativity: nu- must be positive");
    return std::max(0.0, -std::log(nu_minus));
}

// Local-symplectic reduction to standard form: alpha -> sqrt(A) I, beta -> sqrt(B) I,
// gamma -> diag(c+, c-) with |c+| >= |c-|, c+ >= 0 and sign(c+ c-) = sign(det gamma).
inline PairCovariance pair_standard_form(const PairCovariance& pc) {
    auto williamson1 = [](const Eigen::Matrix2d& m) -> Eigen::Matrix2d {
        // symmetric symplectic S with S m S^T proportional to the identity
        const double d = std::sqrt(m.determinant());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m / d);
        Eigen::Vector2d inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
        return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
    };
    const Eigen::Matrix2d SA = williamson1(pc.alpha());
    const Eigen::Matrix2d SB = williamson1(pc.beta());
    Eigen::Matrix2d g = SA * pc.gamma_block() * SB.transpose();

    Eigen::JacobiSVD<Eigen::Matrix2d> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix2d U = svd.matrixU(), W = svd.matrixV();
    Eigen::Vector2d sv = svd.singularValues();
    Eigen::Vector2d sign_fix(1.0, U.determinant() * W.determinant());
    Eigen::Matrix2d RA = Eigen::Vector2d(1.0, U.determinant()).asDiagonal() * U.transpose();
    Eigen::Matrix2d RB = Eigen::Vector2d(1.0, W.determinant()).asDiagonal() * W.transpose();

    PairCovariance out;
    out.V.block<2, 2>(0, 0) = RA * SA * pc.alpha() * SA.transpose() * RA.transpose();
    out.V.block<2, 2>(2, 2) = RB * SB * pc.beta() * SB.transpose() * RB.transpose();
    Eigen::Matrix2d gs = Eigen::Vector2d(sv[0], sv[1] * sign_fix[1]).asDiagonal();
    out.V.block<2, 2>(0, 2) = gs;
    out.V.block<2, 2>(2, 0) = gs.transpose();
    return out;
}

enum class MeasuredParty { A, B };

// Gaussian discord via the closed-form optimum over single-mode Gaussian
// measurements on the measured party. Works on the rescaled covariance 2V
// (vacuum -> 1) through the local-symplectic invariants only.
inline double gaussian_discord(const PairCovariance& pc, MeasuredParty mp = MeasuredParty::B) {
    if (!pair_is_physical(pc.V))
        throw NumericalError("gaussian_discord: covariance violates the uncertainty relation");

    Eigen::Matrix4d Vp = 2.0 * pc.V;
    Eigen::Matrix2d al = Vp.block<2, 2>(0, 0);
    Eigen::Matrix2d be = Vp.block<2, 2>(2, 2);
    Eigen::Matrix2d ga = Vp.block<2, 2>(0, 2);
    if (mp == MeasuredParty::A) {
        std::swap(al, be);
        ga = Vp.block<2, 2>(2, 0);
    }
    const double A = al.determinant();
    const double B = be.determinant();
    const double C = ga.determinant();
    const double Dt = Vp.determinant();

    const double Delta = A + B + 2.0 * C;
    const double disc = std::sqrt(std::max(Delta * Delta - 4.0 * Dt, 0.0));
    const double nu_p = std::sqrt(std::max((Delta + disc) / 2.0, 1.0));
    const double nu_m = std::sqrt(std::max((Delta - disc) / 2.0, 1.0));

    double emin;
    const double lhs = (Dt - A * B) * (Dt - A * B);
    const double rhs = (1.0 + B) * C * C * (A + Dt);
    if (lhs <= rhs && (B - 1.0) * (B - 1.0) > 1e-30) {
        const double root = std::sqrt(std::max(C * C + (B - 1.0) * (Dt - A), 0.0));
        emin = (2.0 * C * C + (B - 1.0) * (Dt - A) + 2.0 * std::abs(C) * root) /
               ((B - 1.0) * (B - 1.0));
    } else {
        const double rad = C * C * C * C + (Dt - A * B) * (Dt - A * B) -
                           2.0 * C * C * (A * B + Dt);
        emin = (A * B - C * C + Dt - std::sqrt(std::max(rad, 0.0))) / (2.0 * B);
    }
    emin = std::max(emin, 1.0);

    auto f = [](double x) {
        x = std::max(x, 1.0);
        const double hi = (x + 1.0) / 2.0;
        const double lo = (x - 1.0) / 2.0;
        return hi * std::log(hi) - (lo > 0.0 ? lo * std::log(lo) : 0.0);
    };
    const double d = f(std::sqrt(B)) - f(nu_p) - f(nu_m) + f(std::sqrt(emin));
    if (d < -1e-9) throw NumericalError("gaussian_discord: negative result beyond tolerance");
    return std::max(d, 0.0);
}

} // namespace triosc
