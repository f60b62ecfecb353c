#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgt/deformed.hpp"
#include "qgt/frechet.hpp"
#include "qgt/functionals.hpp"
#include "qgt/matrix.hpp"
#include "qgt/spectral.hpp"

// Checkers for the deformed Golden-Thompson trace inequality, the classical
// q = 1 case, the differential inequality for the homogeneous trace
// functional, its explicit directional-derivative corollary, and the
// epsilon-decoupled bound with its limit behaviour.
//
// Branch convention: q < 2 takes the first (concave-side) orientation and
// q >= 2 the reversed one; q = 2 sits in the second branch, where both sides
// agree to roundoff.  Every verdict stores the claimed-smaller side in lhs,
// so "claim holds" is uniformly gap = rhs - lhs >= -tol with
// tol = tol_scale * max(1, |lhs|, |rhs|).

namespace qgt {

struct InequalityVerdict {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double relative_margin = 0.0;
    bool holds = false;
    double tol = 0.0;
    double scale = 1.0;
};

inline InequalityVerdict verdict_from_sides(double claimed_smaller, double claimed_larger,
                                            double tol_scale) {
    InequalityVerdict v;
    v.lhs = claimed_smaller;
    v.rhs = claimed_larger;
    v.scale = std::max({1.0, std::abs(v.lhs), std::abs(v.rhs)});
    v.tol = tol_scale * v.scale;
    v.gap = v.rhs - v.lhs;
    v.relative_margin = v.gap / v.scale;
    v.holds = v.gap >= -v.tol;
    return v;
}

// Equality claims: gap = -|lhs - rhs|, so holds iff |lhs - rhs| <= tol.
inline InequalityVerdict verdict_from_equality(double lhs, double rhs, double tol_scale) {
    InequalityVerdict v;
    v.lhs = lhs;
    v.rhs = rhs;
    v.scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    v.tol = tol_scale * v.scale;
    v.gap = -std::abs(lhs - rhs);
    v.relative_margin = v.gap / v.scale;
    v.holds = v.gap >= -v.tol;
    return v;
}

namespace detail {

inline InequalityVerdict oriented_verdict(double natural_lhs, double natural_rhs,
                                          DeformationParameter q, double tol_scale) {
    return (q.value() < 2.0) ? verdict_from_sides(natural_lhs, natural_rhs, tol_scale)
                             : verdict_from_sides(natural_rhs, natural_lhs, tol_scale);
}

} // namespace detail

// The two sides of the deformed Golden-Thompson inequality in their written
// order: { Tr exp_q(A+B),  Tr exp_q(A)^{2-q} (A(q-1) + exp_q B) }.
inline std::pair<double, double> theorem1_sides(const PositiveDefiniteMatrix& a,
                                                const PositiveDefiniteMatrix& b,
                                                DeformationParameter q) {
    const double lhs =
        trace_apply(a.base() + b.base(), [&](double l) { return q_exp(l, q); });

    const double two_minus_q = 2.0 - q.value();
    const SymmetricMatrix weight = apply_function(
        a.decomposition(), [&](double l) { return std::pow(q_exp(l, q), two_minus_q); });
    const SymmetricMatrix inner =
        (q.value() - 1.0) * a.base() +
        apply_function(b.decomposition(), [&](double l) { return q_exp(l, q); });
    return {lhs, trace_product(weight, inner)};
}

// Deformed Golden-Thompson: Tr exp_q(A+B) <= Tr exp_q(A)^{2-q}(A(q-1)+exp_q B)
// for 1 <= q < 2, reversed for 2 <= q <= 3.
inline InequalityVerdict check_theorem1(const PositiveDefiniteMatrix& a,
                                        const PositiveDefiniteMatrix& b,
                                        DeformationParameter q,
                                        double tol_scale = constants::default_tolerance_scale) {
    const auto [lhs, rhs] = theorem1_sides(a, b, q);
    return detail::oriented_verdict(lhs, rhs, q, tol_scale);
}

// Classical Golden-Thompson Tr exp(A+B) <= Tr exp(A) exp(B) for arbitrary
// symmetric A, B (no positivity needed).
inline InequalityVerdict check_classical_gt(const SymmetricMatrix& a,
                                            const SymmetricMatrix& b,
                                            double tol_scale = constants::default_tolerance_scale) {
    detail::require_same_dim(a.dim(), b.dim(), "check_classical_gt");
    const double lhs = trace_apply(a + b, [](double l) { return std::exp(l); });
    const double rhs =
        trace_product(apply_function(a, [](double l) { return std::exp(l); }),
                      apply_function(b, [](double l) { return std::exp(l); }));
    return verdict_from_sides(lhs, rhs, tol_scale);
}

// sum_j H_j^T (d log_q(x_j)[h_j]) H_j, the inner layer of the chain rule.
inline SymmetricMatrix phi_argument_derivative(const IsometryFamily& fam,
                                               const FunctionalPoint& x,
                                               const FunctionalPoint& h,
                                               DeformationParameter q) {
    detail::require_family_point(fam, x);
    detail::require_family_point(fam, h);
    SymmetricMatrix y = congruence(
        fam.member(0), frechet_derivative(x.matrix(0).decomposition(), QLogFun{q},
                                          h.matrix(0).base()));
    for (int i = 1; i < fam.size(); ++i)
        y = y + congruence(fam.member(i),
                           frechet_derivative(x.matrix(i).decomposition(), QLogFun{q},
                                              h.matrix(i).base()));
    return y;
}

// Directional derivative d phi(x)[h], assembled by composing Frechet
// derivatives: d log_q at each x_i, then d exp_q at the aggregated argument.
inline double phi_directional_derivative(const IsometryFamily& fam,
                                         const FunctionalPoint& x,
                                         const FunctionalPoint& h,
                                         DeformationParameter q) {
    const SymmetricMatrix arg = phi_argument(fam, x, q);
    const SymmetricMatrix y = phi_argument_derivative(fam, x, h, q);
    const SpectralDecomposition dec = decompose(arg);
    if (!q.classical()) detail::require_q_exp_domain(dec, q);
    return trace(frechet_derivative(dec, QExpFun{q}, y));
}

// Differential inequality for the positively homogeneous phi:
// d phi(x)[h] >= phi(h) on the concave range 1 <= q <= 2, reversed on
// 2 <= q <= 3.  At h = x both sides meet (Euler relation).
inline InequalityVerdict check_differential_inequality(const IsometryFamily& fam,
                                                       const FunctionalPoint& x,
                                                       const FunctionalPoint& h,
                                                       DeformationParameter q,
                                                       double tol_scale = 1e-8) {
    const double derivative = phi_directional_derivative(fam, x, h, q);
    const double value_at_h = phi(fam, h, q);
    return (q.value() < 2.0) ? verdict_from_sides(value_at_h, derivative, tol_scale)
                             : verdict_from_sides(derivative, value_at_h, tol_scale);
}

// Explicit corollary form: phi(B_1,...,B_k) against
// Tr exp_q(sum H^T log_q(A) H)^{2-q} * sum H_j^T (d log_q(A_j)[B_j]) H_j,
// with the power form replacing the exp_q Frechet factor.
inline InequalityVerdict check_corollary6(const IsometryFamily& fam,
                                          const FunctionalPoint& points_a,
                                          const FunctionalPoint& points_b,
                                          DeformationParameter q,
                                          double tol_scale = 1e-8) {
    const double lhs = phi(fam, points_b, q);

    const SymmetricMatrix arg = phi_argument(fam, points_a, q);
    const SpectralDecomposition dec = decompose(arg);
    if (!q.classical()) detail::require_q_exp_domain(dec, q);
    const double two_minus_q = 2.0 - q.value();
    const SymmetricMatrix weight = apply_function(
        dec, [&](double l) { return std::pow(q_exp(l, q), two_minus_q); });
    const SymmetricMatrix y = phi_argument_derivative(fam, points_a, points_b, q);
    const double rhs = trace_product(weight, y);

    return detail::oriented_verdict(lhs, rhs, q, tol_scale);
}

struct DecouplingParameter {
    double epsilon;

    explicit DecouplingParameter(double eps) : epsilon(eps) {
        if (!(eps > 0.0 && eps < 1.0))
            throw std::domain_error("decoupling parameter must lie in (0, 1), got " +
                                    std::to_string(eps));
    }
};

// Right-hand side of the decoupled bound:
// Tr exp_q(L1)^{2-q} ( L1(q-1) + eps + (1-eps) exp_q((1-eps)^{-1} L2) ).
inline double decoupled_rhs(const PositiveDefiniteMatrix& l1,
                            const PositiveDefiniteMatrix& l2, DeformationParameter q,
                            DecouplingParameter eps) {
    detail::require_same_dim(l1.dim(), l2.dim(), "decoupled_rhs");
    const double e = eps.epsilon;
    const double two_minus_q = 2.0 - q.value();
    const SymmetricMatrix weight = apply_function(
        l1.decomposition(), [&](double l) { return std::pow(q_exp(l, q), two_minus_q); });
    const SymmetricMatrix scaled_exp = apply_function(
        l2.decomposition(), [&](double l) { return (1.0 - e) * q_exp(l / (1.0 - e), q); });
    SymmetricMatrix inner = (q.value() - 1.0) * l1.base() + scaled_exp;
    inner = inner + SymmetricMatrix::from_upper(l1.dim(), [&](int i, int j) {
        return i == j ? e : 0.0;
    });
    return trace_product(weight, inner);
}

// Decoupled bound Tr exp_q(L1+L2) <= rhs(eps) for 1 <= q < 2, reversed for
// 2 <= q <= 3; the sharp Golden-Thompson form is the eps -> 0 limit.
inline InequalityVerdict decoupled_bound(const PositiveDefiniteMatrix& l1,
                                         const PositiveDefiniteMatrix& l2,
                                         DeformationParameter q, DecouplingParameter eps,
                                         double tol_scale = constants::default_tolerance_scale) {
    const double lhs =
        trace_apply(l1.base() + l2.base(), [&](double l) { return q_exp(l, q); });
    const double rhs = decoupled_rhs(l1, l2, q, eps);
    return detail::oriented_verdict(lhs, rhs, q, tol_scale);
}

struct DecayProfile {
    std::vector<double> deviations; // one per grid point
    double loglog_slope = 0.0;      // least-squares slope of log dev vs log eps
};

// Convergence of (1-eps) exp_q((1-eps)^{-1} L2) -> exp_q(L2): max-norm
// deviations along a grid of eps values decreasing toward zero.
inline DecayProfile decoupling_limit_check(const PositiveDefiniteMatrix& l2,
                                           DeformationParameter q,
                                           std::span<const double> eps_grid) {
    if (eps_grid.empty())
        throw std::invalid_argument("decoupling_limit_check needs a nonempty grid");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0 && eps_grid[i] < 1.0))
            throw std::invalid_argument("eps grid values must lie in (0, 1)");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
            throw std::invalid_argument("eps grid must decrease toward zero");
    }

    const SymmetricMatrix limit = apply_function(
        l2.decomposition(), [&](double l) { return q_exp(l, q); });

    DecayProfile profile;
    profile.deviations.reserve(eps_grid.size());
    for (double e : eps_grid) {
        const SymmetricMatrix scaled = apply_function(
            l2.decomposition(), [&](double l) { return (1.0 - e) * q_exp(l / (1.0 - e), q); });
        profile.deviations.push_back(max_abs(scaled - limit));
    }

    // Least-squares slope in log-log coordinates.
    const std::size_t n = eps_grid.size();
    if (n >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double lx = std::log(eps_grid[i]);
            const double ly = std::log(std::max(profile.deviations[i], 1e-300));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double denom = static_cast<double>(n) * sxx - sx * sx;
        profile.loglog_slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    }
    return profile;
}

// Scalar profile f(eps) = eps + (1-eps) exp_q((1-eps)^{-1} l2), the quantity
// whose monotonicity in eps steers the decoupled bound toward its extremum.
inline std::vector<double> decoupling_scalar_profile(double l2, DeformationParameter q,
                                                     std::span<const double> eps_grid) {
    std::vector<double> out;
    out.reserve(eps_grid.size());
    for (double e : eps_grid) {
        DecouplingParameter check(e);
        out.push_back(e + (1.0 - e) * q_exp(l2 / (1.0 - e), q));
    }
    return out;
}

} // namespace qgt
