#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "qgt/matrix.hpp"
#include "qgt/spectral.hpp"

// Frechet derivative of a matrix function in Daleckii-Krein form: in the
// eigenbasis of A the derivative acts entrywise through the first divided
// differences f[l_i, l_j], with f'(l) on the diagonal and for near-degenerate
// pairs.

namespace qgt {

struct DividedDifferenceTable {
    std::vector<double> eigenvalues;
    Matrix table; // symmetric; table(i,i) = f'(l_i)
};

template <DifferentiableScalarFunction F>
DividedDifferenceTable divided_differences(std::span<const double> eigenvalues,
                                           const F& f) {
    const int n = static_cast<int>(eigenvalues.size());
    DividedDifferenceTable dd{std::vector<double>(eigenvalues.begin(), eigenvalues.end()),
                              Matrix(n)};
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = f(eigenvalues[static_cast<std::size_t>(i)]);

    for (int i = 0; i < n; ++i) {
        dd.table(i, i) = f.derivative(eigenvalues[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < n; ++j) {
            const double li = eigenvalues[static_cast<std::size_t>(i)];
            const double lj = eigenvalues[static_cast<std::size_t>(j)];
            const double gap = std::abs(li - lj);
            const double degen = constants::degeneracy_threshold *
                                 std::max({1.0, std::abs(li), std::abs(lj)});
            const double v = (gap <= degen)
                                 ? f.derivative(0.5 * (li + lj))
                                 : (values[static_cast<std::size_t>(i)] - values[static_cast<std::size_t>(j)]) / (li - lj);
            dd.table(i, j) = v;
            dd.table(j, i) = v;
        }
    }
    return dd;
}

// d f(A)[B] = Q (T o (Q^T B Q)) Q^T with T the divided-difference table;
// linear in B and symmetric by construction.
template <DifferentiableScalarFunction F>
SymmetricMatrix frechet_derivative(const SpectralDecomposition& dec, const F& f,
                                   const SymmetricMatrix& b) {
    const int n = dec.basis.dim();
    detail::require_same_dim(n, b.dim(), "frechet_derivative");
    const DividedDifferenceTable dd =
        divided_differences(std::span<const double>(dec.eigenvalues), f);

    const Matrix& q = dec.basis;
    const Matrix bq = b * q;
    const SymmetricMatrix b_rot = SymmetricMatrix::from_upper(n, [&](int i, int j) {
        double acc_ij = 0.0, acc_ji = 0.0;
        for (int k = 0; k < n; ++k) {
            acc_ij += q(k, i) * bq(k, j);
            acc_ji += q(k, j) * bq(k, i);
        }
        return 0.5 * (acc_ij + acc_ji);
    });

    const SymmetricMatrix c = SymmetricMatrix::from_upper(
        n, [&](int i, int j) { return dd.table(i, j) * b_rot(i, j); });

    const Matrix qc = q * c;
    return SymmetricMatrix::from_upper(n, [&](int i, int j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += qc(i, k) * q(j, k);
        return acc;
    });
}

template <DifferentiableScalarFunction F>
SymmetricMatrix frechet_derivative(const SymmetricMatrix& a, const F& f,
                                   const SymmetricMatrix& b) {
    return frechet_derivative(decompose(a), f, b);
}

// Residual of the trace identity Tr d f(A)[B] = Tr f'(A) B.
template <DifferentiableScalarFunction F>
double trace_derivative_residual(const SymmetricMatrix& a, const F& f,
                                 const SymmetricMatrix& b) {
    const SpectralDecomposition dec = decompose(a);
    const double lhs = trace(frechet_derivative(dec, f, b));
    const SymmetricMatrix fprime =
        apply_function(dec, [&](double x) { return f.derivative(x); });
    const double rhs = trace_product(fprime, b);
    return std::abs(lhs - rhs);
}

} // namespace qgt
