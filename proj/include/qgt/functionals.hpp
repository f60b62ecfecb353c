#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgt/deformed.hpp"
#include "qgt/matrix.hpp"
#include "qgt/random.hpp"
#include "qgt/spectral.hpp"

// The deformed trace functional
//
//     phi(A_1,...,A_k) = Tr exp_q( sum_i H_i^T log_q(A_i) H_i )
//
// over k-tuples of positive definite matrices, weighted by an isometry
// family sum H_i^T H_i = 1 (or <= 1 for the sub-complete variant), together
// with its closed-form rewriting, the L-augmented variant, and the
// Carlen-Lieb functional Tr( sum H_i^T A_i^p H_i )^{1/p}.

namespace qgt {

enum class Completeness { exact, sub };

class IsometryFamily {
public:
    IsometryFamily(std::vector<Matrix> members, Completeness completeness)
        : members_(std::move(members)), completeness_(completeness) {
        if (members_.empty())
            throw std::invalid_argument("isometry family must have k >= 1 members");
        if (members_.size() > 8)
            throw std::invalid_argument("isometry family capped at k <= 8 members");
        const int d = members_.front().dim();
        for (const Matrix& h : members_)
            detail::require_same_dim(d, h.dim(), "isometry family");

        const SymmetricMatrix s = completeness_sum();
        if (completeness_ == Completeness::exact) {
            const double dev = max_abs(s - SymmetricMatrix::identity(d));
            if (dev > 1e-10)
                throw std::invalid_argument(
                    "family is not complete: ||sum H^T H - I||_max = " +
                    std::to_string(dev));
        } else {
            const double top = decompose(s).eigenvalues.back();
            if (top > 1.0 + 1e-10)
                throw std::invalid_argument(
                    "family is not sub-complete: largest eigenvalue of sum H^T H = " +
                    std::to_string(top));
        }
    }

    int size() const noexcept { return static_cast<int>(members_.size()); }
    int dim() const noexcept { return members_.front().dim(); }
    Completeness completeness() const noexcept { return completeness_; }
    const Matrix& member(int i) const { return members_[static_cast<std::size_t>(i)]; }
    const std::vector<Matrix>& members() const noexcept { return members_; }

    SymmetricMatrix completeness_sum() const {
        SymmetricMatrix s = gram(members_.front());
        for (std::size_t i = 1; i < members_.size(); ++i) s = s + gram(members_[i]);
        return s;
    }

private:
    std::vector<Matrix> members_;
    Completeness completeness_;
};

// Seeded family construction: H_i = G_i S^{-1/2} with S = sum G_i^T G_i from
// Gaussian draws.  Ill-conditioned S (cond > 1e8) is rejected and redrawn
// from fresh seed material, a bounded number of times.  Sub-complete
// families scale an exact family by a factor in (0,1).
inline IsometryFamily make_isometry_family(int k, int dim, std::uint64_t seed,
                                           Completeness completeness,
                                           std::optional<double> sub_scale = {}) {
    if (k < 1) throw std::invalid_argument("isometry family needs k >= 1");
    if (dim < 1) throw std::invalid_argument("isometry family needs dim >= 1");
    if (sub_scale && !(*sub_scale > 0.0 && *sub_scale < 1.0))
        throw std::invalid_argument("sub-family scale must lie in (0, 1)");

    constexpr int max_attempts = 16;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));

        std::vector<Matrix> g;
        g.reserve(static_cast<std::size_t>(k));
        for (int m = 0; m < k; ++m) {
            Matrix gm(dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) gm(i, j) = rng.normal();
            g.push_back(std::move(gm));
        }

        SymmetricMatrix s = gram(g.front());
        for (int m = 1; m < k; ++m) s = s + gram(g[static_cast<std::size_t>(m)]);

        const SpectralDecomposition dec = decompose(s);
        const double lmin = dec.eigenvalues.front();
        const double lmax = dec.eigenvalues.back();
        if (!(lmin > 0.0) || lmax / lmin > 1e8) continue;

        const SymmetricMatrix s_inv_half =
            apply_function(dec, [](double x) { return 1.0 / std::sqrt(x); });

        std::vector<Matrix> members;
        members.reserve(static_cast<std::size_t>(k));
        for (int m = 0; m < k; ++m)
            members.push_back(g[static_cast<std::size_t>(m)] * s_inv_half);

        if (completeness == Completeness::sub) {
            const double c = sub_scale ? *sub_scale : rng.uniform(0.3, 0.9);
            for (Matrix& h : members) h = c * h;
        }
        return IsometryFamily(std::move(members), completeness);
    }
    throw std::runtime_error(
        "make_isometry_family: no well-conditioned Gaussian draw in " +
        std::to_string(max_attempts) + " attempts");
}

class FunctionalPoint {
public:
    explicit FunctionalPoint(std::vector<PositiveDefiniteMatrix> matrices)
        : matrices_(std::move(matrices)) {
        if (matrices_.empty())
            throw std::invalid_argument("functional point must be nonempty");
        const int d = matrices_.front().dim();
        for (const auto& m : matrices_)
            detail::require_same_dim(d, m.dim(), "functional point");
    }

    int size() const noexcept { return static_cast<int>(matrices_.size()); }
    int dim() const noexcept { return matrices_.front().dim(); }
    const PositiveDefiniteMatrix& matrix(int i) const {
        return matrices_[static_cast<std::size_t>(i)];
    }

private:
    std::vector<PositiveDefiniteMatrix> matrices_;
};

inline FunctionalPoint random_point(int k, int dim, double lambda_min,
                                    double lambda_max, std::uint64_t seed) {
    std::vector<PositiveDefiniteMatrix> ms;
    ms.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        ms.push_back(random_pd(RandomEnsembleSpec(
            dim, lambda_min, lambda_max, derive_seed(seed, static_cast<std::uint64_t>(i)))));
    return FunctionalPoint(std::move(ms));
}

// Componentwise t*X.
inline FunctionalPoint scale_point(const FunctionalPoint& x, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("point scaling needs t > 0");
    std::vector<PositiveDefiniteMatrix> ms;
    ms.reserve(static_cast<std::size_t>(x.size()));
    for (int i = 0; i < x.size(); ++i)
        ms.emplace_back(t * x.matrix(i).base());
    return FunctionalPoint(std::move(ms));
}

// Componentwise (1-t)*X + t*Y.
inline FunctionalPoint blend_points(const FunctionalPoint& x, const FunctionalPoint& y,
                                    double t) {
    if (x.size() != y.size())
        throw std::invalid_argument("blended points must have equal arity");
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("blend parameter must lie in [0, 1]");
    std::vector<PositiveDefiniteMatrix> ms;
    ms.reserve(static_cast<std::size_t>(x.size()));
    for (int i = 0; i < x.size(); ++i)
        ms.emplace_back((1.0 - t) * x.matrix(i).base() + t * y.matrix(i).base());
    return FunctionalPoint(std::move(ms));
}

namespace detail {

inline void require_family_point(const IsometryFamily& fam, const FunctionalPoint& pt) {
    if (fam.size() != pt.size())
        throw std::invalid_argument("family and point arity mismatch: k = " +
                                    std::to_string(fam.size()) + " vs " +
                                    std::to_string(pt.size()));
    require_same_dim(fam.dim(), pt.dim(), "family/point");
}

} // namespace detail

// sum_i H_i^T log_q(A_i) H_i.
inline SymmetricMatrix phi_argument(const IsometryFamily& fam, const FunctionalPoint& pt,
                                    DeformationParameter q) {
    detail::require_family_point(fam, pt);
    SymmetricMatrix x = congruence(fam.member(0), matrix_q_log(pt.matrix(0), q));
    for (int i = 1; i < fam.size(); ++i)
        x = x + congruence(fam.member(i), matrix_q_log(pt.matrix(i), q));
    return x;
}

// phi(A_1,...,A_k) = Tr exp_q( sum_i H_i^T log_q(A_i) H_i ).  Requires an
// exact family; positively homogeneous of degree one.
inline double phi(const IsometryFamily& fam, const FunctionalPoint& pt,
                  DeformationParameter q) {
    if (fam.completeness() != Completeness::exact)
        throw std::invalid_argument("phi requires an exact isometry family");
    const SymmetricMatrix x = phi_argument(fam, pt, q);
    const SpectralDecomposition dec = decompose(x);
    if (!q.classical()) detail::require_q_exp_domain(dec, q);
    return trace_apply(dec, [&](double l) { return q_exp(l, q); });
}

// Closed form Tr( sum_i H_i^T A_i^{q-1} H_i )^{1/(q-1)} for q > 1; the two
// evaluation routes coincide for exact families.  At q = 1 the rewriting
// degenerates and the definitional form is the closed form.
inline double phi_closed_form(const IsometryFamily& fam, const FunctionalPoint& pt,
                              DeformationParameter q) {
    if (fam.completeness() != Completeness::exact)
        throw std::invalid_argument("phi requires an exact isometry family");
    if (q.classical()) return phi(fam, pt, q);
    detail::require_family_point(fam, pt);

    const double qm1 = q.value() - 1.0;
    auto powered = [&](int i) {
        return congruence(fam.member(i),
                          apply_function(pt.matrix(i).decomposition(),
                                         [&](double l) { return std::pow(l, qm1); }));
    };
    SymmetricMatrix m = powered(0);
    for (int i = 1; i < fam.size(); ++i) m = m + powered(i);

    const SpectralDecomposition dec = decompose(m);
    if (!(dec.eigenvalues.front() > 0.0))
        throw std::domain_error(
            "phi closed form: inner sum lost positivity (smallest eigenvalue " +
            std::to_string(dec.eigenvalues.front()) + ")");
    return trace_apply(dec, [&](double l) { return std::pow(l, 1.0 / qm1); });
}

// Tr exp_q( L + sum_i H_i^T log_q(A_i) H_i ) for positive definite L and a
// sub-complete family.  The exp_q domain can genuinely be violated here, so
// the spectrum is checked and reported.
inline double phi_with_L(const IsometryFamily& fam, const PositiveDefiniteMatrix& l,
                         const FunctionalPoint& pt, DeformationParameter q) {
    detail::require_same_dim(fam.dim(), l.dim(), "phi_with_L");
    const SymmetricMatrix x = l.base() + phi_argument(fam, pt, q);
    const SpectralDecomposition dec = decompose(x);
    if (!q.classical()) detail::require_q_exp_domain(dec, q);
    return trace_apply(dec, [&](double lam) { return q_exp(lam, q); });
}

// Completes a strictly sub-complete family with H_{k+1} = (I - sum H^T H)^{1/2}.
inline IsometryFamily augment_to_exact(const IsometryFamily& fam) {
    if (fam.completeness() != Completeness::sub)
        throw std::invalid_argument("augment_to_exact expects a sub-complete family");
    const SymmetricMatrix gap = SymmetricMatrix::identity(fam.dim()) - fam.completeness_sum();
    const SpectralDecomposition dec = decompose(gap);
    if (!(dec.eigenvalues.front() > 1e-12))
        throw std::domain_error(
            "augment_to_exact: family is not strictly sub-complete (deficiency "
            "eigenvalue " +
            std::to_string(dec.eigenvalues.front()) + ")");
    std::vector<Matrix> members = fam.members();
    members.push_back(
        apply_function(dec, [](double x) { return std::sqrt(x); }).to_matrix());
    return IsometryFamily(std::move(members), Completeness::exact);
}

// Carlen-Lieb functional Tr( sum_i H_i^T A_i^p H_i )^{1/p} for 0 < p <= 2,
// over arbitrary square weight matrices.
inline double carlen_lieb(const std::vector<Matrix>& weights, const FunctionalPoint& pt,
                          double p) {
    if (!(p > 0.0 && p <= 2.0))
        throw std::invalid_argument("carlen_lieb requires 0 < p <= 2, got " +
                                    std::to_string(p));
    if (weights.empty() || static_cast<int>(weights.size()) != pt.size())
        throw std::invalid_argument("weights and point arity mismatch");
    for (const Matrix& h : weights)
        detail::require_same_dim(h.dim(), pt.dim(), "carlen_lieb");

    auto powered = [&](std::size_t i) {
        return congruence(weights[i],
                          apply_function(pt.matrix(static_cast<int>(i)).decomposition(),
                                         [&](double l) { return std::pow(l, p); }));
    };
    SymmetricMatrix m = powered(0);
    for (std::size_t i = 1; i < weights.size(); ++i) m = m + powered(i);

    const SpectralDecomposition dec = decompose(m);
    const double top = dec.eigenvalues.back();
    const double floor = dec.eigenvalues.front();
    if (floor < -1e-10 * std::max(1.0, top))
        throw std::domain_error(
            "carlen_lieb: inner sum is not positive semidefinite (smallest "
            "eigenvalue " +
            std::to_string(floor) + ")");
    double t = 0.0;
    for (double mu : dec.eigenvalues)
        if (mu > 0.0) t += std::pow(mu, 1.0 / p);
    if (!(t > 0.0))
        throw std::domain_error("carlen_lieb: inner sum has nonpositive trace");
    return t;
}

} // namespace qgt
