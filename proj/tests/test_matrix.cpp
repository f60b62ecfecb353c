#include <catch2/catch_amalgamated.hpp>

#include "qgt/matrix.hpp"
#include "qgt/random.hpp"

using namespace qgt;

TEST_CASE("symmetric matrix mirrors entries exactly") {
    // Deliberately asymmetric raw input.
    SymmetricMatrix m(2, {1.0, 2.0, 3.0, 4.0});
    REQUIRE(m(0, 1) == m(1, 0));
    REQUIRE(m(0, 1) == 2.5);
    REQUIRE(m(0, 0) == 1.0);
    REQUIRE(m(1, 1) == 4.0);
}

TEST_CASE("constructors validate dimensions") {
    REQUIRE_THROWS_AS(SymmetricMatrix(0), std::invalid_argument);
    REQUIRE_THROWS_AS(Matrix(-1), std::invalid_argument);
    REQUIRE_THROWS_AS(SymmetricMatrix(2, {1.0, 2.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(SymmetricMatrix({{1.0, 2.0}, {3.0}}), std::invalid_argument);
}

TEST_CASE("trace and trace_product") {
    SymmetricMatrix d = SymmetricMatrix::diagonal({1.0, 2.0, 3.0});
    REQUIRE(trace(d) == 6.0);
    REQUIRE(trace(SymmetricMatrix::identity(5)) == 5.0);

    // Tr(ab) via entrywise sum must match the full product's trace.
    SplitMix64 rng(11);
    SymmetricMatrix a = random_symmetric(4, -1.0, 1.0, rng);
    SymmetricMatrix b = random_symmetric(4, -1.0, 1.0, rng);
    const double direct = trace(a.to_matrix() * b.to_matrix());
    REQUIRE(trace_product(a, b) == Catch::Approx(direct).margin(1e-13));
}

TEST_CASE("congruence equals the naive triple product") {
    SplitMix64 rng(12);
    Matrix h(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) h(i, j) = rng.normal();
    SymmetricMatrix s = random_symmetric(3, -2.0, 2.0, rng);

    const Matrix naive = transpose(h) * (s * h);
    const SymmetricMatrix c = congruence(h, s);
    REQUIRE(max_abs(c - symmetrized(naive)) < 1e-13);
    // Result is symmetric bitwise.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) REQUIRE(c(i, j) == c(j, i));
}

TEST_CASE("gram matches transpose-times-self") {
    SplitMix64 rng(13);
    Matrix h(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h(i, j) = rng.normal();
    const Matrix naive = transpose(h) * h;
    REQUIRE(max_abs(gram(h) - symmetrized(naive)) < 1e-13);
}

TEST_CASE("arithmetic is entrywise") {
    SymmetricMatrix a{{1.0, 2.0}, {2.0, 3.0}};
    SymmetricMatrix b{{0.5, -1.0}, {-1.0, 2.0}};
    const SymmetricMatrix sum = a + b;
    REQUIRE(sum(0, 0) == 1.5);
    REQUIRE(sum(0, 1) == 1.0);
    const SymmetricMatrix scaled = 2.0 * a;
    REQUIRE(scaled(1, 1) == 6.0);
    REQUIRE(max_abs(a - a) == 0.0);
}
