// ns.hpp — Noiseless-subsystem conditions: constraint hypersurface, protected-mode
// closed forms, tuned parameters for the canonical chain configurations.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "triosc/errors.hpp"
#include "triosc/system.hpp"

namespace triosc {

enum class Branch { plus, minus };

enum class ConfigLabel { a, b, c, d, e, f, none };

inline const char* to_string(ConfigLabel c) {
    switch (c) {
        case ConfigLabel::a: return "a";
        case ConfigLabel::b: return "b";
        case ConfigLabel::c: return "c";
        case ConfigLabel::d: return "d";
        case ConfigLabel::e: return "e";
        case ConfigLabel::f: return "f";
        default: return "none";
    }
}

// Reduced parameter combinations entering the constraint: Delta and Sigma are
// frequency-squared differences, R the two branch roots shifted by the mean
// external frequency. The zero-sum mode candidate frequency is R + (w1^2+w3^2)/2.
struct DeltaQuantities {
    double Delta{0.0};
    double Sigma{0.0};
    double radicand{0.0};
    double R_plus{0.0};
    double R_minus{0.0};
    bool branches_real{false};
};

inline DeltaQuantities delta_quantities(const SystemParams& p) {
    DeltaQuantities q;
    q.Delta = (p.omega_sq[0] - p.omega_sq[2]) / 2.0;
    q.Sigma = (p.omega_sq[0] + p.omega_sq[2]) / 2.0 - p.omega_sq[1];
    const double L = (p.l12 + p.l23) / 2.0;
    q.radicand = (q.Delta + L - p.l13) * (q.Delta + L - p.l13) + 2.0 * q.Delta * (p.l13 - p.l12);
    q.branches_real = q.radicand >= 0.0;
    if (q.branches_real) {
        const double s = std::sqrt(q.radicand);
        q.R_plus = -L + s;
        q.R_minus = -L - s;
    }
    return q;
}

namespace detail {

inline double scale_of(const SystemParams& p) {
    double s = 1.0;
    for (double w : p.omega_sq) s = std::max(s, std::abs(w));
    s = std::max({s, std::abs(p.l12), std::abs(p.l13), std::abs(p.l23)});
    return s;
}

inline double param_tol(const SystemParams& p) { return 1e-9 * scale_of(p); }

// Candidate frequency of the zero-sum mode on the chosen branch.
inline double branch_root(const SystemParams& p, Branch b) {
    const DeltaQuantities q = delta_quantities(p);
    if (!q.branches_real)
        throw BranchUndefined("constraint branch: negative radicand, no zero-sum candidate");
    const double R = (b == Branch::plus) ? q.R_plus : q.R_minus;
    return R + (p.omega_sq[0] + p.omega_sq[2]) / 2.0;
}

// Adjugate of a symmetric 3x3 matrix; columns span the null space at an eigenvalue.
inline Eigen::Matrix3d adjugate(const Eigen::Matrix3d& A) {
    Eigen::Matrix3d adj;
    adj(0, 0) = A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
    adj(0, 1) = A(0, 2) * A(2, 1) - A(0, 1) * A(2, 2);
    adj(0, 2) = A(0, 1) * A(1, 2) - A(0, 2) * A(1, 1);
    adj(1, 0) = A(1, 2) * A(2, 0) - A(1, 0) * A(2, 2);
    adj(1, 1) = A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0);
    adj(1, 2) = A(0, 2) * A(1, 0) - A(0, 0) * A(1, 2);
    adj(2, 0) = A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0);
    adj(2, 1) = A(0, 1) * A(2, 0) - A(0, 0) * A(2, 1);
    adj(2, 2) = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    return adj;
}

} // namespace detail

// Constraint residual on the chosen branch: the characteristic polynomial
// det(H - x I) evaluated at the zero-sum candidate frequency x(branch).
// Zero iff the candidate is an actual eigenvalue; cross-checked in callers
// against the kappa test from direct diagonalization, which is authoritative.
inline double constraint_residual(const SystemParams& p, Branch b) {
    const Eigen::Matrix3d h = build_hamiltonian(p);
    const double x = detail::branch_root(p, b);
    return (h - x * Eigen::Matrix3d::Identity()).determinant();
}

// Protected normal mode on a constraint branch: frequency from the closed-form
// quadratic, vector from the adjugate null space (unnormalized).
struct DeltaMode {
    double omega_delta_sq{0.0};
    Eigen::Vector3d vector{Eigen::Vector3d::Zero()};
    double normalization{0.0};
};

inline DeltaMode delta_mode(const SystemParams& p, Branch b) {
    const Eigen::Matrix3d h = build_hamiltonian(p);
    const double x = detail::branch_root(p, b);
    if (!(x > 0.0)) throw NonPhysical("delta_mode: candidate frequency squared is not positive");

    const double scale = detail::scale_of(p);
    const NormalModes nm = normal_modes(p);
    int match = -1;
    for (int n = 0; n < 3; ++n) {
        if (nm.is_free(n) && std::abs(nm.omega_sq()[n] - x) < 1e-6 * scale) match = n;
    }
    if (match < 0) {
        const double res = (h - x * Eigen::Matrix3d::Identity()).determinant();
        throw NotOnManifold("delta_mode: no protected mode on this branch (residual " +
                            std::to_string(res) + ")");
    }

    DeltaMode d;
    d.omega_delta_sq = x;
    const Eigen::Matrix3d adj = detail::adjugate(h - x * Eigen::Matrix3d::Identity());
    int col = 0;
    for (int c = 1; c < 3; ++c)
        if (adj.col(c).norm() > adj.col(col).norm()) col = c;
    if (adj.col(col).norm() > 1e-12 * scale * scale) {
        d.vector = adj.col(col);
    } else {
        d.vector = nm.F.col(match); // degenerate eigenvalue: take the rotated basis vector
    }
    d.normalization = 1.0 / d.vector.norm();
    return d;
}

// Center-of-mass-mode test: both relations must hold and the CM frequency
// must be real. When true, exactly two normal modes decouple from the bath.
struct TwoModeCheck {
    bool is_two_mode{false};
    double omega_cm_sq{0.0};
};

inline TwoModeCheck two_mode_check(const SystemParams& p) {
    const double tol = detail::param_tol(p);
    TwoModeCheck r;
    r.omega_cm_sq = p.omega_sq[0] + p.omega_sq[2] - p.omega_sq[1] + 2.0 * p.l13;
    const bool relA = std::abs(p.omega_sq[0] - (p.omega_sq[1] + p.l23 - p.l13)) < tol;
    const bool relB = std::abs(p.omega_sq[2] - (p.omega_sq[1] + p.l12 - p.l13)) < tol;
    r.is_two_mode = relA && relB && r.omega_cm_sq > 0.0;
    return r;
}

// Tuned central frequency placing a symmetric chain (w1 = w3) on the
// constraint manifold.
inline double tuned_omega2_sq(const SystemParams& p) {
    const double tol = detail::param_tol(p);
    if (std::abs(p.omega_sq[0] - p.omega_sq[2]) > tol)
        throw SymmetryViolated("tuned omega2 requires w1 = w3");
    const double denom = p.l12 + p.l23 - 2.0 * p.l13;
    if (std::abs(denom) < tol)
        throw NonPhysical("tuned omega2: degenerate denominator l12 + l23 - 2 l13 = 0");
    const double w2sq = p.omega_sq[0] +
        (2.0 * p.l13 * (p.l12 + p.l23 - p.l13) - 2.0 * p.l12 * p.l23) / denom;

    SystemParams tuned = p;
    tuned.omega_sq[1] = w2sq;
    try {
        build_hamiltonian(tuned);
    } catch (const PositivityError&) {
        throw NonPhysical("tuned omega2 loses positive-definiteness");
    }
    const NormalModes nm = normal_modes(tuned);
    if (nm.free_mode_count() < 1)
        throw NotOnManifold("tuned omega2 failed re-validation");
    return w2sq;
}

// Tuned coupling for a two-mode NS on a symmetric chain: l12 = l23 = w^2 - w2^2 + l13.
// (That value is forced by the center-of-mass relations; re-validated below.)
inline double tuned_lambda0(const SystemParams& p) {
    const double tol = detail::param_tol(p);
    if (std::abs(p.omega_sq[0] - p.omega_sq[2]) > tol)
        throw SymmetryViolated("tuned lambda0 requires w1 = w3");
    const double lam = p.omega_sq[0] - p.omega_sq[1] + p.l13;

    SystemParams tuned = p;
    tuned.l12 = tuned.l23 = lam;
    try {
        build_hamiltonian(tuned);
    } catch (const PositivityError&) {
        throw NonPhysical("tuned lambda0 loses positive-definiteness");
    }
    if (!two_mode_check(tuned).is_two_mode)
        throw NonPhysical("tuned lambda0: center-of-mass frequency is not real");
    return lam;
}

// Tuned equal couplings l12 = l23 = l13 +- sqrt((w2^2-w1^2)(w2^2-w3^2)); both
// branches are returned and each must stay on the manifold.
inline std::array<double, 2> tuned_lambda_pm(const SystemParams& p) {
    const double tol = detail::param_tol(p);
    if (std::abs(p.l12 - p.l23) > tol)
        throw SymmetryViolated("tuned lambda_pm requires l12 = l23");
    const double rad = (p.omega_sq[1] - p.omega_sq[0]) * (p.omega_sq[1] - p.omega_sq[2]);
    if (rad < 0.0)
        throw NonPhysical("tuned lambda_pm: (w2^2-w1^2)(w2^2-w3^2) < 0, no real coupling");
    const double s = std::sqrt(rad);
    const std::array<double, 2> values{p.l13 + s, p.l13 - s};
    for (double lam : values) {
        SystemParams tuned = p;
        tuned.l12 = tuned.l23 = lam;
        try {
            build_hamiltonian(tuned);
        } catch (const PositivityError&) {
            throw NonPhysical("tuned lambda_pm loses positive-definiteness");
        }
        if (normal_modes(tuned).free_mode_count() < 1)
            throw NotOnManifold("tuned lambda_pm failed re-validation");
    }
    return values;
}

// Matches the parameters against the chain configurations with a protected
// mode: a/b symmetric frequencies, c/d tuned equal couplings, e/f two-mode.
// Two-mode labels win over one-mode ones.
inline ConfigLabel classify(const SystemParams& p) {
    const double tol = detail::param_tol(p);
    try {
        build_hamiltonian(p);
    } catch (const PositivityError&) {
        return ConfigLabel::none;
    }

    if (two_mode_check(p).is_two_mode)
        return std::abs(p.l13) < tol ? ConfigLabel::e : ConfigLabel::f;

    const bool sym_w = std::abs(p.omega_sq[0] - p.omega_sq[2]) < tol;
    const bool sym_l = std::abs(p.l12 - p.l23) < tol;
    if (sym_w && sym_l) return ConfigLabel::a;
    if (sym_w) {
        const double denom = p.l12 + p.l23 - 2.0 * p.l13;
        if (std::abs(denom) > tol) {
            const double w2sq = p.omega_sq[0] +
                (2.0 * p.l13 * (p.l12 + p.l23 - p.l13) - 2.0 * p.l12 * p.l23) / denom;
            if (std::abs(p.omega_sq[1] - w2sq) < tol) return ConfigLabel::b;
        }
    }
    if (sym_l) {
        const double rad = (p.omega_sq[1] - p.omega_sq[0]) * (p.omega_sq[1] - p.omega_sq[2]);
        if (rad >= 0.0) {
            const double s = std::sqrt(rad);
            if (std::abs(p.l12 - (p.l13 + s)) < tol || std::abs(p.l12 - (p.l13 - s)) < tol)
                return std::abs(p.l13) < tol ? ConfigLabel::c : ConfigLabel::d;
        }
    }
    return ConfigLabel::none;
}

// Summary report: couplings, residuals, reduced quantities and the protected
// mode count (from diagonalization, which is the authoritative test).
struct NsReport {
    Eigen::Vector3d kappa{Eigen::Vector3d::Zero()};
    double residual{0.0}; // smallest-|.| branch residual; NaN if branches undefined
    DeltaQuantities dq;
    int ns_mode_count{0};
    ConfigLabel config{ConfigLabel::none};
};

inline NsReport ns_report(const SystemParams& p) {
    NsReport r;
    const NormalModes nm = normal_modes(p);
    r.kappa = nm.kappa;
    r.ns_mode_count = nm.free_mode_count();
    r.dq = delta_quantities(p);
    if (r.dq.branches_real) {
        const double rp = constraint_residual(p, Branch::plus);
        const double rm = constraint_residual(p, Branch::minus);
        r.residual = std::abs(rp) <= std::abs(rm) ? rp : rm;
    } else {
        r.residual = std::numeric_limits<double>::quiet_NaN();
    }
    r.config = classify(p);
    return r;
}

} // namespace triosc
