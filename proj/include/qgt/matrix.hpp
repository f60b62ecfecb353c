#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgt {

namespace detail {

inline int checked_dim(int dim) {
    if (dim < 1)
        throw std::invalid_argument("matrix dimension must be >= 1, got " +
                                    std::to_string(dim));
    return dim;
}

} // namespace detail

// Dense square matrix, row-major.  Used for isometry members, eigenbases and
// intermediate products; no symmetry is assumed.
class Matrix {
public:
    explicit Matrix(int dim)
        : dim_(detail::checked_dim(dim)),
          a_(static_cast<std::size_t>(dim_) * dim_, 0.0) {}

    Matrix(int dim, std::vector<double> entries)
        : dim_(detail::checked_dim(dim)), a_(std::move(entries)) {
        if (a_.size() != static_cast<std::size_t>(dim_) * dim_)
            throw std::invalid_argument("entry count does not match dim*dim");
    }

    static Matrix identity(int dim) {
        Matrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const noexcept { return dim_; }

    double operator()(int i, int j) const noexcept {
        return a_[static_cast<std::size_t>(i) * dim_ + j];
    }
    double& operator()(int i, int j) noexcept {
        return a_[static_cast<std::size_t>(i) * dim_ + j];
    }

    const std::vector<double>& entries() const noexcept { return a_; }

private:
    int dim_;
    std::vector<double> a_;
};

// Real symmetric matrix.  Entries are mirrored at construction so the (i,j)
// and (j,i) slots stay bitwise equal for the lifetime of the value.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(int dim)
        : dim_(detail::checked_dim(dim)),
          a_(static_cast<std::size_t>(dim_) * dim_, 0.0) {}

    // Symmetrizes arbitrary raw entries: both slots receive (x_ij + x_ji)/2.
    SymmetricMatrix(int dim, const std::vector<double>& entries)
        : SymmetricMatrix(dim) {
        if (entries.size() != a_.size())
            throw std::invalid_argument("entry count does not match dim*dim");
        for (int i = 0; i < dim_; ++i) {
            at(i, i) = entries[idx(i, i)];
            for (int j = i + 1; j < dim_; ++j) {
                const double v = 0.5 * (entries[idx(i, j)] + entries[idx(j, i)]);
                at(i, j) = v;
                at(j, i) = v;
            }
        }
    }

    SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows)
        : SymmetricMatrix(detail::checked_dim(static_cast<int>(rows.size()))) {
        int i = 0;
        std::vector<double> raw(a_.size(), 0.0);
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != dim_)
                throw std::invalid_argument("ragged initializer for symmetric matrix");
            int j = 0;
            for (double v : row) raw[idx(i, j++)] = v;
            ++i;
        }
        *this = SymmetricMatrix(dim_, raw);
    }

    static SymmetricMatrix identity(int dim) {
        SymmetricMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }

    static SymmetricMatrix diagonal(const std::vector<double>& d) {
        SymmetricMatrix m(detail::checked_dim(static_cast<int>(d.size())));
        for (int i = 0; i < m.dim_; ++i) m.at(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    // Builds from an upper-triangle generator g(i,j), i <= j; the lower
    // triangle mirrors it exactly.
    template <class Gen>
    static SymmetricMatrix from_upper(int dim, Gen&& g) {
        SymmetricMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                const double v = g(i, j);
                m.at(i, j) = v;
                m.at(j, i) = v;
            }
        return m;
    }

    int dim() const noexcept { return dim_; }

    double operator()(int i, int j) const noexcept { return a_[idx(i, j)]; }

    const std::vector<double>& entries() const noexcept { return a_; }

    Matrix to_matrix() const { return Matrix(dim_, a_); }

private:
    std::size_t idx(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * dim_ + j;
    }
    double& at(int i, int j) noexcept { return a_[idx(i, j)]; }

    int dim_;
    std::vector<double> a_;
};

namespace detail {

inline void require_same_dim(int a, int b, const char* what) {
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
}

// out = a * b for row-major square buffers of size n.
inline void multiply_raw(int n, const double* a, const double* b, double* out) {
    for (int i = 0; i < n; ++i) {
        double* row = out + static_cast<std::size_t>(i) * n;
        std::fill(row, row + n, 0.0);
        for (int k = 0; k < n; ++k) {
            const double aik = a[static_cast<std::size_t>(i) * n + k];
            if (aik == 0.0) continue;
            const double* brow = b + static_cast<std::size_t>(k) * n;
            for (int j = 0; j < n; ++j) row[j] += aik * brow[j];
        }
    }
}

} // namespace detail

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "matrix product");
    Matrix out(a.dim());
    detail::multiply_raw(a.dim(), a.entries().data(), b.entries().data(),
                         &out(0, 0));
    return out;
}

inline Matrix operator*(const SymmetricMatrix& a, const Matrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "matrix product");
    Matrix out(a.dim());
    detail::multiply_raw(a.dim(), a.entries().data(), b.entries().data(),
                         &out(0, 0));
    return out;
}

inline Matrix operator*(const Matrix& a, const SymmetricMatrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "matrix product");
    Matrix out(a.dim());
    detail::multiply_raw(a.dim(), a.entries().data(), b.entries().data(),
                         &out(0, 0));
    return out;
}

inline Matrix transpose(const Matrix& m) {
    Matrix out(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) out(j, i) = m(i, j);
    return out;
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "matrix sum");
    Matrix out(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) out(i, j) = a(i, j) + b(i, j);
    return out;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "matrix difference");
    Matrix out(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) out(i, j) = a(i, j) - b(i, j);
    return out;
}

inline Matrix operator*(double s, const Matrix& m) {
    Matrix out(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) out(i, j) = s * m(i, j);
    return out;
}

inline SymmetricMatrix operator+(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "matrix sum");
    return SymmetricMatrix::from_upper(
        a.dim(), [&](int i, int j) { return a(i, j) + b(i, j); });
}

inline SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "matrix difference");
    return SymmetricMatrix::from_upper(
        a.dim(), [&](int i, int j) { return a(i, j) - b(i, j); });
}

inline SymmetricMatrix operator*(double s, const SymmetricMatrix& m) {
    return SymmetricMatrix::from_upper(
        m.dim(), [&](int i, int j) { return s * m(i, j); });
}

// (m + m^T)/2, for products that are symmetric up to roundoff.
inline SymmetricMatrix symmetrized(const Matrix& m) {
    return SymmetricMatrix::from_upper(
        m.dim(), [&](int i, int j) { return 0.5 * (m(i, j) + m(j, i)); });
}

// h^T s h, mirrored from the upper triangle.
inline SymmetricMatrix congruence(const Matrix& h, const SymmetricMatrix& s) {
    detail::require_same_dim(h.dim(), s.dim(), "congruence");
    const Matrix t = s * h;
    const int n = h.dim();
    return SymmetricMatrix::from_upper(n, [&](int i, int j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += h(k, i) * t(k, j);
        return acc;
    });
}

// h^T h.
inline SymmetricMatrix gram(const Matrix& h) {
    const int n = h.dim();
    return SymmetricMatrix::from_upper(n, [&](int i, int j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += h(k, i) * h(k, j);
        return acc;
    });
}

inline double trace(const Matrix& m) {
    double t = 0.0;
    for (int i = 0; i < m.dim(); ++i) t += m(i, i);
    return t;
}

inline double trace(const SymmetricMatrix& m) {
    double t = 0.0;
    for (int i = 0; i < m.dim(); ++i) t += m(i, i);
    return t;
}

// Tr(a b) for symmetric a, b: sum of entrywise products.
inline double trace_product(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "trace product");
    double t = 0.0;
    const auto& xs = a.entries();
    const auto& ys = b.entries();
    for (std::size_t i = 0; i < xs.size(); ++i) t += xs[i] * ys[i];
    return t;
}

inline double max_abs(const Matrix& m) {
    double v = 0.0;
    for (double x : m.entries()) v = std::max(v, std::abs(x));
    return v;
}

inline double max_abs(const SymmetricMatrix& m) {
    double v = 0.0;
    for (double x : m.entries()) v = std::max(v, std::abs(x));
    return v;
}

inline double frobenius_norm(const SymmetricMatrix& m) {
    double s = 0.0;
    for (double x : m.entries()) s += x * x;
    return std::sqrt(s);
}

} // namespace qgt
