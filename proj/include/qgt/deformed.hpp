#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "qgt/matrix.hpp"
#include "qgt/spectral.hpp"

// Deformed (Tsallis) calculus: the q-logarithm
//
//     log_q x = (x^{q-1} - 1)/(q - 1)   (q > 1),   log x at q = 1,
//
// its inverse exp_q(x) = (x(q-1) + 1)^{1/(q-1)} on x > -1/(q-1), their
// derivative identities, the matrix versions via spectral calculus, and the
// Tsallis entropy.  Near q = 1 the scalar kernels route through expm1/log1p
// to avoid cancellation; below |q-1| = 1e-12 they switch to log/exp exactly.

namespace qgt {

class DeformationParameter {
public:
    explicit DeformationParameter(double q) : q_(q) {
        if (!(q >= 1.0 && q <= 3.0))
            throw std::domain_error("deformation parameter must lie in [1, 3], got " +
                                    std::to_string(q));
    }

    double value() const noexcept { return q_; }

    // Treat q as exactly 1 below this gap; the deformed formulas degrade to
    // 0/0 there while log/exp are the correct limits.
    bool classical() const noexcept { return q_ - 1.0 < 1e-12; }

    // Infimum of exp_q's domain: -1/(q-1) for q > 1, -inf at q = 1.
    double domain_floor() const noexcept {
        return classical() ? -std::numeric_limits<double>::infinity()
                           : -1.0 / (q_ - 1.0);
    }

private:
    double q_;
};

inline double q_log(double x, DeformationParameter q) {
    if (!(x > 0.0))
        throw std::domain_error("q_log requires x > 0, got " + std::to_string(x));
    if (q.classical()) return std::log(x);
    const double qm1 = q.value() - 1.0;
    return std::expm1(qm1 * std::log(x)) / qm1;
}

inline double q_exp(double x, DeformationParameter q) {
    if (q.classical()) return std::exp(x);
    const double qm1 = q.value() - 1.0;
    const double arg = x * qm1;
    if (!(arg > -1.0))
        throw std::domain_error("q_exp domain violation: x = " + std::to_string(x) +
                                " is not above the boundary -1/(q-1) = " +
                                std::to_string(q.domain_floor()));
    return std::exp(std::log1p(arg) / qm1);
}

// d/dx log_q(x) = x^{q-2}.
inline double q_log_derivative(double x, DeformationParameter q) {
    if (!(x > 0.0))
        throw std::domain_error("q_log_derivative requires x > 0, got " +
                                std::to_string(x));
    return std::pow(x, q.value() - 2.0);
}

// d/dx exp_q(x) = exp_q(x)^{2-q}.
inline double q_exp_derivative(double x, DeformationParameter q) {
    return std::pow(q_exp(x, q), 2.0 - q.value());
}

// Scalar function objects for the spectral and Frechet machinery.

struct QLogFun {
    DeformationParameter q;
    double operator()(double x) const { return q_log(x, q); }
    double derivative(double x) const { return q_log_derivative(x, q); }
};

struct QExpFun {
    DeformationParameter q;
    double operator()(double x) const { return q_exp(x, q); }
    double derivative(double x) const { return q_exp_derivative(x, q); }
};

// x^p on x > 0 (p may be fractional).
struct PowerFun {
    double p;
    double operator()(double x) const {
        if (!(x > 0.0))
            throw std::domain_error("x^p requires x > 0, got " + std::to_string(x));
        return std::pow(x, p);
    }
    double derivative(double x) const {
        if (!(x > 0.0))
            throw std::domain_error("x^p derivative requires x > 0, got " +
                                    std::to_string(x));
        return p * std::pow(x, p - 1.0);
    }
};

inline SymmetricMatrix matrix_q_log(const PositiveDefiniteMatrix& a,
                                    DeformationParameter q) {
    return apply_function(a.decomposition(), QLogFun{q});
}

namespace detail {

inline void require_q_exp_domain(const SpectralDecomposition& dec,
                                 DeformationParameter q) {
    const double floor = q.domain_floor();
    const double lmin = dec.eigenvalues.front();
    if (!(lmin > floor))
        throw std::domain_error(
            "matrix_q_exp domain violation: smallest eigenvalue " +
            std::to_string(lmin) + " does not exceed -1/(q-1) = " +
            std::to_string(floor));
}

} // namespace detail

inline PositiveDefiniteMatrix matrix_q_exp(const SymmetricMatrix& x,
                                           DeformationParameter q) {
    const SpectralDecomposition dec = decompose(x);
    detail::require_q_exp_domain(dec, q);
    return PositiveDefiniteMatrix(apply_function(dec, QExpFun{q}));
}

// Positive definite with unit trace.
class DensityMatrix {
public:
    explicit DensityMatrix(PositiveDefiniteMatrix rho) : rho_(std::move(rho)) {
        const double t = trace(rho_.base());
        if (std::abs(t - 1.0) > 1e-12)
            throw std::invalid_argument("density matrix trace must be 1 within 1e-12, got " +
                                        std::to_string(t));
    }

    const PositiveDefiniteMatrix& matrix() const noexcept { return rho_; }
    int dim() const noexcept { return rho_.dim(); }

private:
    PositiveDefiniteMatrix rho_;
};

// S_q(rho) = (1 - Tr rho^q)/(q - 1), computed from the spectrum; von Neumann
// entropy -Tr rho log rho at q = 1.
inline double tsallis_entropy(const DensityMatrix& rho, DeformationParameter q) {
    const auto& lambda = rho.matrix().decomposition().eigenvalues;
    if (q.classical()) {
        double s = 0.0;
        for (double l : lambda) s -= l * std::log(l);
        return s;
    }
    double trace_q = 0.0;
    for (double l : lambda) trace_q += std::pow(l, q.value());
    return (1.0 - trace_q) / (q.value() - 1.0);
}

// Cross-check form S_q(rho) = -Tr rho log_q(rho) assembled through the
// matrix product rather than the spectrum.
inline double tsallis_entropy_via_qlog(const DensityMatrix& rho,
                                       DeformationParameter q) {
    const SymmetricMatrix l = apply_function(rho.matrix().decomposition(), [&](double x) {
        return q_log(x, q);
    });
    return -trace_product(rho.matrix().base(), l);
}

} // namespace qgt
