#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "qgt/random.hpp"
#include "qgt/spectral.hpp"
#include "support/oracles.hpp"

using namespace qgt;

TEST_CASE("decompose: identity") {
    const auto dec = decompose(SymmetricMatrix::identity(3));
    for (double l : dec.eigenvalues) REQUIRE(l == Catch::Approx(1.0).margin(1e-14));
    // Basis is only constrained through reconstruction.
    const SymmetricMatrix rec = apply_function(dec, [](double x) { return x; });
    REQUIRE(max_abs(rec - SymmetricMatrix::identity(3)) < 1e-13);
}

TEST_CASE("decompose: diagonal sorts ascending") {
    const auto dec = decompose(SymmetricMatrix::diagonal({3.0, 1.0, 2.0}));
    REQUIRE(dec.eigenvalues[0] == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(dec.eigenvalues[1] == Catch::Approx(2.0).margin(1e-14));
    REQUIRE(dec.eigenvalues[2] == Catch::Approx(3.0).margin(1e-14));
}

TEST_CASE("decompose: 2x2 against the characteristic polynomial") {
    // l^2 - 4l + 3 = 0 -> eigenvalues {1, 3}.
    const auto [lo, hi] = test::eigenvalues_2x2(2.0, 1.0, 2.0);
    REQUIRE(lo == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(hi == Catch::Approx(3.0).margin(1e-14));

    const auto dec = decompose(SymmetricMatrix{{2.0, 1.0}, {1.0, 2.0}});
    REQUIRE(dec.eigenvalues[0] == Catch::Approx(1.0).margin(1e-13));
    REQUIRE(dec.eigenvalues[1] == Catch::Approx(3.0).margin(1e-13));
}

TEST_CASE("decompose: non-finite input fails to converge") {
    SymmetricMatrix m(2, {1.0, std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN(), 1.0});
    REQUIRE_THROWS_AS(decompose(m), std::runtime_error);
}

TEST_CASE("apply_function: identity and square") {
    SplitMix64 rng(21);
    const SymmetricMatrix m = random_symmetric(4, -2.0, 2.0, rng);
    REQUIRE(max_abs(apply_function(m, [](double x) { return x; }) - m) <
            1e-11 * std::max(1.0, max_abs(m)));

    const SymmetricMatrix sq =
        apply_function(SymmetricMatrix::diagonal({1.0, 2.0}), [](double x) { return x * x; });
    REQUIRE(sq(0, 0) == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(sq(1, 1) == Catch::Approx(4.0).margin(1e-14));
    REQUIRE(sq(0, 1) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("apply_function: square root of the 2x2 example") {
    const SymmetricMatrix m{{2.0, 1.0}, {1.0, 2.0}};
    const SymmetricMatrix r = apply_function(m, [](double x) { return std::sqrt(x); });
    const auto dec = decompose(r);
    REQUIRE(dec.eigenvalues[0] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(dec.eigenvalues[1] == Catch::Approx(std::sqrt(3.0)).margin(1e-12));
    // Same eigenvectors: r commutes with m and r*r recovers m.
    REQUIRE(max_abs(symmetrized(r.to_matrix() * m.to_matrix()) -
                    symmetrized(m.to_matrix() * r.to_matrix())) < 1e-12);
    REQUIRE(max_abs(symmetrized(r.to_matrix() * r.to_matrix()) - m) < 1e-12);
}

TEST_CASE("apply_function composes") {
    SplitMix64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const SymmetricMatrix m = random_symmetric(5, -2.0, 2.0, rng);
        const auto g = [](double x) { return 0.4 * x; };
        const auto f = [](double x) { return std::exp(x); };
        const SymmetricMatrix composed =
            apply_function(m, [&](double x) { return f(g(x)); });
        const SymmetricMatrix chained = apply_function(apply_function(m, g), f);
        REQUIRE(max_abs(composed - chained) < 1e-9);
    }
}

TEST_CASE("random_pd: degenerate range gives the exact scalar") {
    const auto m = random_pd(RandomEnsembleSpec(1, 2.0, 2.0, 77));
    REQUIRE(m.base()(0, 0) == 2.0);
}

TEST_CASE("random_pd: deterministic per seed") {
    const RandomEnsembleSpec spec(6, 0.1, 10.0, 42);
    const auto a = random_pd(spec);
    const auto b = random_pd(spec);
    REQUIRE(a.base().entries() == b.base().entries()); // bitwise
}

TEST_CASE("random_pd: spectrum stays inside the requested range") {
    const auto m = random_pd(RandomEnsembleSpec(8, 0.1, 10.0, 42));
    const auto dec = m.decomposition();
    REQUIRE(dec.eigenvalues.front() >= 0.1 - 1e-9);
    REQUIRE(dec.eigenvalues.back() <= 10.0 + 1e-9);
}

TEST_CASE("random_pd: spec validation") {
    REQUIRE_THROWS_AS(RandomEnsembleSpec(0, 1.0, 2.0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(RandomEnsembleSpec(2, 0.0, 2.0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(RandomEnsembleSpec(2, 3.0, 2.0, 1), std::invalid_argument);
}

TEST_CASE("positive definite wrapper rejects indefinite input") {
    REQUIRE_THROWS_AS(PositiveDefiniteMatrix(SymmetricMatrix::diagonal({1.0, -0.5})),
                      std::domain_error);
    REQUIRE_THROWS_AS(PositiveDefiniteMatrix(SymmetricMatrix::diagonal({0.0, 1.0})),
                      std::domain_error);
    const PositiveDefiniteMatrix p(SymmetricMatrix::diagonal({0.5, 2.0}));
    REQUIRE(p.spectrum_floor() == Catch::Approx(0.5).margin(1e-14));
}

TEST_CASE("trace equals the eigenvalue sum") {
    REQUIRE(trace(SymmetricMatrix{{2.0, 1.0}, {1.0, 2.0}}) == 4.0);

    SplitMix64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 1 + static_cast<int>(rng.next() % 8);
        const SymmetricMatrix m = random_symmetric(dim, -3.0, 3.0, rng);
        const auto dec = decompose(m);
        double sum = 0.0;
        for (double l : dec.eigenvalues) sum += l;
        REQUIRE(std::abs(trace(m) - sum) <= 1e-10 * std::max(1.0, max_abs(m)));
    }
}

TEST_CASE("reconstruction and orthogonality over a seeded ensemble") {
    // 1000 random symmetric matrices, dims 1-16.
    SplitMix64 rng(24);
    for (int trial = 0; trial < 1000; ++trial) {
        const int dim = 1 + static_cast<int>(rng.next() % 16);
        const SymmetricMatrix m = random_symmetric(dim, -5.0, 5.0, rng);
        const auto dec = decompose(m);

        double ortho = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double dot = 0.0;
                for (int k = 0; k < dim; ++k) dot += dec.basis(k, i) * dec.basis(k, j);
                ortho = std::max(ortho, std::abs(dot - (i == j ? 1.0 : 0.0)));
            }
        REQUIRE(ortho <= 1e-12);

        const SymmetricMatrix rec = apply_function(dec, [](double x) { return x; });
        REQUIRE(max_abs(rec - m) <= 1e-11 * std::max(1.0, max_abs(m)));
    }
}
