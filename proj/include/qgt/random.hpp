#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgt/matrix.hpp"
#include "qgt/spectral.hpp"

// Seeded ensemble generation.  All randomness flows through SplitMix64, a
// portable 64-bit generator; every draw order is fixed, so an ensemble spec
// pins the resulting matrix bit for bit.

namespace qgt {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // [0, 1), 53-bit resolution.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; consumes exactly two raw draws per call.
    double normal() noexcept {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Derives an independent substream seed; chain calls to mix in several
// indices (suite, cell, trial, ...).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) noexcept {
    return detail::mix64(base + 0x9E3779B97F4A7C15ULL * (salt + 1));
}

struct RandomEnsembleSpec {
    int dim;
    double lambda_min;
    double lambda_max;
    std::uint64_t seed;

    RandomEnsembleSpec(int d, double lo, double hi, std::uint64_t s)
        : dim(d), lambda_min(lo), lambda_max(hi), seed(s) {
        if (dim < 1)
            throw std::invalid_argument("ensemble dim must be >= 1");
        if (!(lambda_min > 0.0))
            throw std::invalid_argument("eigenvalue range must have lambda_min > 0");
        if (!(lambda_min <= lambda_max))
            throw std::invalid_argument("eigenvalue range must have lambda_min <= lambda_max");
    }
};

// Haar-like random orthogonal basis: Gram-Schmidt (two passes) of a seeded
// standard-normal matrix.  Column norms are the triangular factor's diagonal
// and are positive by construction, which fixes the sign convention.
inline Matrix random_orthogonal(int dim, SplitMix64& rng) {
    Matrix g(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();

    Matrix q(dim);
    for (int j = 0; j < dim; ++j) {
        std::vector<double> v(static_cast<std::size_t>(dim));
        for (int attempt = 0;; ++attempt) {
            for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] = g(i, j);
            for (int pass = 0; pass < 2; ++pass)
                for (int c = 0; c < j; ++c) {
                    double dot = 0.0;
                    for (int i = 0; i < dim; ++i) dot += q(i, c) * v[static_cast<std::size_t>(i)];
                    for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] -= dot * q(i, c);
                }
            double norm = 0.0;
            for (double x : v) norm += x * x;
            norm = std::sqrt(norm);
            if (norm > 1e-12) {
                for (int i = 0; i < dim; ++i) q(i, j) = v[static_cast<std::size_t>(i)] / norm;
                break;
            }
            if (attempt >= 8)
                throw std::runtime_error("random_orthogonal: degenerate Gaussian column");
            for (int i = 0; i < dim; ++i) g(i, j) = rng.normal();
        }
    }
    return q;
}

// Random positive definite matrix: eigenvalues log-uniform in
// [lambda_min, lambda_max], eigenbasis Haar-like, deterministic per seed.
inline PositiveDefiniteMatrix random_pd(const RandomEnsembleSpec& spec) {
    SplitMix64 rng(spec.seed);

    std::vector<double> lambda(static_cast<std::size_t>(spec.dim));
    if (spec.lambda_min == spec.lambda_max) {
        for (double& l : lambda) l = spec.lambda_min;
    } else {
        const double llo = std::log(spec.lambda_min);
        const double lhi = std::log(spec.lambda_max);
        for (double& l : lambda) l = std::exp(rng.uniform(llo, lhi));
    }

    if (spec.dim == 1)
        return PositiveDefiniteMatrix(SymmetricMatrix::diagonal(lambda));

    const Matrix q = random_orthogonal(spec.dim, rng);
    SymmetricMatrix m = SymmetricMatrix::from_upper(spec.dim, [&](int i, int j) {
        double acc = 0.0;
        for (int k = 0; k < spec.dim; ++k)
            acc += q(i, k) * lambda[static_cast<std::size_t>(k)] * q(j, k);
        return acc;
    });
    return PositiveDefiniteMatrix(std::move(m));
}

// Random symmetric matrix with entries uniform in [lo, hi]; not necessarily
// definite.  Upper triangle drawn row by row.
inline SymmetricMatrix random_symmetric(int dim, double lo, double hi, SplitMix64& rng) {
    return SymmetricMatrix::from_upper(dim, [&](int, int) { return rng.uniform(lo, hi); });
}

inline SymmetricMatrix random_symmetric(int dim, double lo, double hi, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return random_symmetric(dim, lo, hi, rng);
}

// Random strictly positive density-matrix candidate: spectrum bounded away
// from zero, normalized to unit trace.
inline PositiveDefiniteMatrix random_unit_trace_pd(int dim, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> lambda(static_cast<std::size_t>(dim));
    double sum = 0.0;
    for (double& l : lambda) {
        l = 0.05 + 0.95 * rng.uniform01();
        sum += l;
    }
    for (double& l : lambda) l /= sum;

    if (dim == 1) return PositiveDefiniteMatrix(SymmetricMatrix::diagonal(lambda));

    const Matrix q = random_orthogonal(dim, rng);
    SymmetricMatrix m = SymmetricMatrix::from_upper(dim, [&](int i, int j) {
        double acc = 0.0;
        for (int k = 0; k < dim; ++k)
            acc += q(i, k) * lambda[static_cast<std::size_t>(k)] * q(j, k);
        return acc;
    });
    return PositiveDefiniteMatrix(std::move(m));
}

} // namespace qgt
