#pragma once

#include <cmath>
#include <concepts>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgt/matrix.hpp"

// Spectral engine: cyclic Jacobi eigendecomposition for dense real symmetric
// matrices, matrix functions f(A) = Q f(L) Q^T, and the positive definite
// wrapper type.  Target scale is dim <= 64; the solver favours orthogonality
// and reproducibility over speed.

namespace qgt {

namespace constants {

// Jacobi sweep convergence: off(A) <= jacobi_off_factor * ||A||_F.
inline constexpr double jacobi_off_factor = 1e-13;
inline constexpr int jacobi_max_sweeps = 100;

// SpectralDecomposition invariants.
inline constexpr double orthogonality_tol = 1e-12;
inline constexpr double reconstruction_tol = 1e-11; // x max(1, ||M||_max)

// Divided differences fall back to the midpoint derivative when
// |l_i - l_j| <= degeneracy_threshold * max(1, |l_i|, |l_j|).
inline constexpr double degeneracy_threshold = 1e-8;

// Central finite-difference step used by the derivative oracles.
inline constexpr double fd_step = 1e-5;

inline constexpr double default_tolerance_scale = 1e-9;

} // namespace constants

template <class F>
concept ScalarFunction = requires(const F& f, double x) {
    { f(x) } -> std::convertible_to<double>;
};

template <class F>
concept DifferentiableScalarFunction =
    ScalarFunction<F> && requires(const F& f, double x) {
        { f.derivative(x) } -> std::convertible_to<double>;
    };

// Eigenvalues ascending; basis columns are the matching orthonormal
// eigenvectors, so M = basis * diag(eigenvalues) * basis^T.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    Matrix basis;
};

namespace detail {

inline void jacobi_rotate(Matrix& a, Matrix& v, int p, int q) {
    const double apq = a(p, q);
    if (apq == 0.0) return;
    const int n = a.dim();

    const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
    const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                  : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    for (int r = 0; r < n; ++r) { // A <- A J
        const double arp = a(r, p), arq = a(r, q);
        a(r, p) = c * arp - s * arq;
        a(r, q) = s * arp + c * arq;
    }
    for (int r = 0; r < n; ++r) { // A <- J^T A
        const double apr = a(p, r), aqr = a(q, r);
        a(p, r) = c * apr - s * aqr;
        a(q, r) = s * apr + c * aqr;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (int r = 0; r < n; ++r) { // V <- V J
        const double vrp = v(r, p), vrq = v(r, q);
        v(r, p) = c * vrp - s * vrq;
        v(r, q) = s * vrp + c * vrq;
    }
}

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

inline void validate_decomposition(const SymmetricMatrix& m,
                                   const SpectralDecomposition& dec) {
    const int n = m.dim();
    const Matrix& q = dec.basis;

    double ortho = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double dot = 0.0;
            for (int k = 0; k < n; ++k) dot += q(k, i) * q(k, j);
            ortho = std::max(ortho, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    if (!(ortho <= constants::orthogonality_tol))
        throw std::runtime_error("eigenbasis lost orthogonality: ||Q^T Q - I||_max = " +
                                 std::to_string(ortho));

    const double bound = constants::reconstruction_tol * std::max(1.0, max_abs(m));
    double resid = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double rec = 0.0;
            for (int k = 0; k < n; ++k)
                rec += q(i, k) * dec.eigenvalues[static_cast<std::size_t>(k)] * q(j, k);
            resid = std::max(resid, std::abs(rec - m(i, j)));
        }
    if (!(resid <= bound))
        throw std::runtime_error("eigendecomposition reconstruction residual " +
                                 std::to_string(resid) + " exceeds bound " +
                                 std::to_string(bound));
}

} // namespace detail

// Cyclic Jacobi eigendecomposition.  Throws if the off-diagonal norm has not
// dropped below jacobi_off_factor * ||M||_F after jacobi_max_sweeps sweeps.
inline SpectralDecomposition decompose(const SymmetricMatrix& m) {
    const int n = m.dim();
    Matrix a = m.to_matrix();
    Matrix v = Matrix::identity(n);

    const double threshold = constants::jacobi_off_factor * frobenius_norm(m);
    int sweep = 0;
    for (; sweep < constants::jacobi_max_sweeps; ++sweep) {
        if (detail::off_diagonal_norm(a) <= threshold) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    }
    if (sweep == constants::jacobi_max_sweeps &&
        !(detail::off_diagonal_norm(a) <= threshold))
        throw std::runtime_error(
            "Jacobi eigensolver did not converge in " +
            std::to_string(constants::jacobi_max_sweeps) + " sweeps (off-norm " +
            std::to_string(detail::off_diagonal_norm(a)) + ", threshold " +
            std::to_string(threshold) + ")");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) < a(j, j); });

    SpectralDecomposition dec{std::vector<double>(static_cast<std::size_t>(n)),
                              Matrix(n)};
    for (int j = 0; j < n; ++j) {
        dec.eigenvalues[static_cast<std::size_t>(j)] = a(order[static_cast<std::size_t>(j)],
                                                         order[static_cast<std::size_t>(j)]);
        for (int i = 0; i < n; ++i) dec.basis(i, j) = v(i, order[static_cast<std::size_t>(j)]);
    }

    detail::validate_decomposition(m, dec);
    return dec;
}

// Q f(L) Q^T from a precomputed decomposition.
template <ScalarFunction F>
SymmetricMatrix apply_function(const SpectralDecomposition& dec, const F& f) {
    const int n = dec.basis.dim();
    std::vector<double> fl(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) fl[static_cast<std::size_t>(k)] = f(dec.eigenvalues[static_cast<std::size_t>(k)]);
    const Matrix& q = dec.basis;
    return SymmetricMatrix::from_upper(n, [&](int i, int j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += q(i, k) * fl[static_cast<std::size_t>(k)] * q(j, k);
        return acc;
    });
}

template <ScalarFunction F>
SymmetricMatrix apply_function(const SymmetricMatrix& m, const F& f) {
    return apply_function(decompose(m), f);
}

// Tr f(M) = sum_k f(l_k); avoids assembling the matrix.
template <ScalarFunction F>
double trace_apply(const SpectralDecomposition& dec, const F& f) {
    double t = 0.0;
    for (double l : dec.eigenvalues) t += f(l);
    return t;
}

template <ScalarFunction F>
double trace_apply(const SymmetricMatrix& m, const F& f) {
    return trace_apply(decompose(m), f);
}

// Symmetric matrix with strictly positive spectrum, validated at
// construction; the decomposition is kept so downstream matrix functions do
// not re-solve.
class PositiveDefiniteMatrix {
public:
    explicit PositiveDefiniteMatrix(SymmetricMatrix base)
        : base_(std::move(base)), dec_(decompose(base_)) {
        if (dec_.eigenvalues.front() <= 0.0)
            throw std::domain_error(
                "matrix is not positive definite: smallest eigenvalue = " +
                std::to_string(dec_.eigenvalues.front()));
    }

    const SymmetricMatrix& base() const noexcept { return base_; }
    const SpectralDecomposition& decomposition() const noexcept { return dec_; }

    double spectrum_floor() const noexcept { return dec_.eigenvalues.front(); }
    int dim() const noexcept { return base_.dim(); }
    double operator()(int i, int j) const noexcept { return base_(i, j); }

private:
    SymmetricMatrix base_;
    SpectralDecomposition dec_;
};

inline double trace(const PositiveDefiniteMatrix& m) { return trace(m.base()); }

} // namespace qgt
