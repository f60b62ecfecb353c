#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qgt/inequalities.hpp"
#include "support/oracles.hpp"

using namespace qgt;

namespace {

PositiveDefiniteMatrix seeded_pd(int dim, std::uint64_t seed, double lo = 0.05,
                                 double hi = 20.0) {
    return random_pd(RandomEnsembleSpec(dim, lo, hi, seed));
}

// Simultaneously diagonalizable pair: same random basis, independent spectra.
std::pair<PositiveDefiniteMatrix, PositiveDefiniteMatrix> commuting_pair(int dim,
                                                                         std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> d1(static_cast<std::size_t>(dim)), d2(d1);
    for (double& v : d1) v = std::exp(rng.uniform(std::log(0.1), std::log(5.0)));
    for (double& v : d2) v = std::exp(rng.uniform(std::log(0.1), std::log(5.0)));
    if (dim == 1)
        return {PositiveDefiniteMatrix(SymmetricMatrix::diagonal(d1)),
                PositiveDefiniteMatrix(SymmetricMatrix::diagonal(d2))};
    const Matrix q = random_orthogonal(dim, rng);
    auto rotate = [&](const std::vector<double>& d) {
        return PositiveDefiniteMatrix(SymmetricMatrix::from_upper(dim, [&](int i, int j) {
            double acc = 0.0;
            for (int k = 0; k < dim; ++k) acc += q(i, k) * d[static_cast<std::size_t>(k)] * q(j, k);
            return acc;
        }));
    };
    return {rotate(d1), rotate(d2)};
}

} // namespace

TEST_CASE("verdict bookkeeping") {
    const InequalityVerdict v = verdict_from_sides(2.0, 5.0, 1e-9);
    REQUIRE(v.gap == 3.0);
    REQUIRE(v.scale == 5.0);
    REQUIRE(v.relative_margin == Catch::Approx(0.6));
    REQUIRE(v.holds);

    const InequalityVerdict bad = verdict_from_sides(5.0, 2.0, 1e-9);
    REQUIRE(bad.gap == -3.0);
    REQUIRE_FALSE(bad.holds);

    const InequalityVerdict eq = verdict_from_equality(1.0, 1.0 + 1e-12, 1e-9);
    REQUIRE(eq.holds);
    REQUIRE(eq.gap <= 0.0);
    REQUIRE_FALSE(verdict_from_equality(1.0, 1.1, 1e-9).holds);
}

TEST_CASE("theorem1: q = 2 degenerates to equality") {
    // exp_2(x) = x + 1 and the weight power vanishes, so both sides are
    // Tr(A + B + 1).
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = seeded_pd(4, derive_seed(100, static_cast<std::uint64_t>(trial)));
        const auto b = seeded_pd(4, derive_seed(200, static_cast<std::uint64_t>(trial)));
        const auto [lhs, rhs] = theorem1_sides(a, b, DeformationParameter(2.0));
        const double expected = trace(a.base()) + trace(b.base()) + 4.0;
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        REQUIRE(std::abs(lhs - expected) <= 1e-10 * scale);
        REQUIRE(std::abs(rhs - expected) <= 1e-10 * scale);

        const InequalityVerdict v = check_theorem1(a, b, DeformationParameter(2.0));
        REQUIRE(std::abs(v.gap) <= 1e-10 * v.scale);
        REQUIRE(v.holds);
    }
}

TEST_CASE("theorem1: the dim-1 worked point") {
    const PositiveDefiniteMatrix one(SymmetricMatrix{{1.0}});
    const InequalityVerdict v = check_theorem1(one, one, DeformationParameter(1.5));
    REQUIRE(v.lhs == Catch::Approx(4.0).epsilon(1e-13));
    REQUIRE(v.rhs == Catch::Approx(4.125).epsilon(1e-13));
    REQUIRE(v.gap == Catch::Approx(0.125).epsilon(1e-12));
    REQUIRE(v.holds);
}

TEST_CASE("theorem1: q = 1 is tight for commuting matrices") {
    for (int trial = 0; trial < 20; ++trial) {
        const auto [a, b] = commuting_pair(3, derive_seed(300, static_cast<std::uint64_t>(trial)));
        const InequalityVerdict v = check_theorem1(a, b, DeformationParameter(1.0));
        REQUIRE(std::abs(v.gap) <= v.tol);
    }
}

TEST_CASE("theorem1: holds across the q range on random ensembles") {
    for (double qv : {1.0, 1.3, 1.7, 2.0, 2.3, 2.7, 3.0}) {
        const DeformationParameter q(qv);
        for (int trial = 0; trial < 40; ++trial) {
            const std::uint64_t seed =
                derive_seed(static_cast<std::uint64_t>(qv * 1000), static_cast<std::uint64_t>(trial));
            const int dim = 1 + static_cast<int>(seed % 8);
            const auto a = seeded_pd(dim, derive_seed(seed, 1));
            const auto b = seeded_pd(dim, derive_seed(seed, 2));
            REQUIRE(check_theorem1(a, b, q).holds);
        }
    }
}

TEST_CASE("theorem1: dim-1 matches the independent scalar oracle") {
    for (double qv : {1.0, 1.2, 1.5, 1.9, 2.0, 2.4, 3.0}) {
        for (double a : {0.1, 0.7, 1.0, 4.0, 20.0}) {
            for (double b : {0.2, 1.0, 9.0}) {
                const auto [slhs, srhs] = test::scalar_theorem1_sides(a, b, qv);
                const auto [mlhs, mrhs] =
                    theorem1_sides(PositiveDefiniteMatrix(SymmetricMatrix{{a}}),
                                   PositiveDefiniteMatrix(SymmetricMatrix{{b}}),
                                   DeformationParameter(qv));
                REQUIRE(test::rel_diff(slhs, mlhs) < 1e-12);
                REQUIRE(test::rel_diff(srhs, mrhs) < 1e-12);
            }
        }
    }
}

TEST_CASE("theorem1: gap changes sign across q = 2") {
    const auto a = seeded_pd(3, 1237);
    const auto b = seeded_pd(3, 1249);
    double prev_below = 0.0, prev_above = 0.0;
    for (double step : {0.4, 0.2, 0.1, 0.05}) {
        const auto [llo, rlo] = theorem1_sides(a, b, DeformationParameter(2.0 - step));
        const auto [lhi, rhi] = theorem1_sides(a, b, DeformationParameter(2.0 + step));
        const double below = rlo - llo; // positive branch
        const double above = rhi - lhi; // negative branch
        REQUIRE(below > 0.0);
        REQUIRE(above < 0.0);
        if (prev_below != 0.0) {
            REQUIRE(std::abs(below) < std::abs(prev_below) * 1.05);
            REQUIRE(std::abs(above) < std::abs(prev_above) * 1.05);
        }
        prev_below = below;
        prev_above = above;
    }
}

TEST_CASE("classical Golden-Thompson: pinned cases") {
    SplitMix64 rng(71);
    const SymmetricMatrix a = random_symmetric(3, -2.0, 2.0, rng);
    REQUIRE(std::abs(check_classical_gt(a, SymmetricMatrix(3)).gap) <= 1e-12);

    // Commuting symmetric pair: equality.
    const SymmetricMatrix c = random_symmetric(3, -1.0, 1.0, rng);
    const SymmetricMatrix c2 = symmetrized(c.to_matrix() * c.to_matrix());
    const InequalityVerdict commuting = check_classical_gt(c, c2);
    REQUIRE(std::abs(commuting.gap) <= commuting.tol);

    // Known strict case: A = [[0,1],[1,0]], B = diag(1,-1).
    const SymmetricMatrix x{{0.0, 1.0}, {1.0, 0.0}};
    const SymmetricMatrix y = SymmetricMatrix::diagonal({1.0, -1.0});
    const InequalityVerdict strict = check_classical_gt(x, y);
    // Oracle: Tr e^X e^Y = 2 cosh(1)^2, Tr e^{X+Y} = 2 cosh(sqrt 2).
    REQUIRE(strict.rhs == Catch::Approx(2.0 * std::cosh(1.0) * std::cosh(1.0)).epsilon(1e-12));
    REQUIRE(strict.lhs == Catch::Approx(2.0 * std::cosh(std::sqrt(2.0))).epsilon(1e-12));
    REQUIRE(strict.gap > 0.1);
    REQUIRE(strict.holds);
}

TEST_CASE("classical Golden-Thompson holds on random symmetric pairs") {
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint64_t seed = derive_seed(7100, static_cast<std::uint64_t>(trial));
        const int dim = 1 + static_cast<int>(seed % 8);
        SplitMix64 rng(seed);
        const SymmetricMatrix a = random_symmetric(dim, -2.0, 2.0, rng);
        const SymmetricMatrix b = random_symmetric(dim, -2.0, 2.0, rng);
        REQUIRE(check_classical_gt(a, b).holds);
    }
}

TEST_CASE("differential inequality: Euler relation at h = x") {
    for (double qv : {1.0, 1.5, 2.0, 2.5, 3.0}) {
        const DeformationParameter q(qv);
        const IsometryFamily fam = make_isometry_family(2, 3, 401, Completeness::exact);
        const FunctionalPoint x = random_point(2, 3, 0.1, 10.0, 409);
        const InequalityVerdict v = check_differential_inequality(fam, x, x, q);
        REQUIRE(std::abs(v.gap) <= 1e-8 * v.scale);
        REQUIRE(v.holds);
    }
}

TEST_CASE("differential inequality: q = 2 is linear, equality for all pairs") {
    const DeformationParameter q(2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::uint64_t seed = derive_seed(430, static_cast<std::uint64_t>(trial));
        const IsometryFamily fam =
            make_isometry_family(2, 3, derive_seed(seed, 1), Completeness::exact);
        const FunctionalPoint x = random_point(2, 3, 0.1, 10.0, derive_seed(seed, 2));
        const FunctionalPoint h = random_point(2, 3, 0.1, 10.0, derive_seed(seed, 3));
        const InequalityVerdict v = check_differential_inequality(fam, x, h, q);
        REQUIRE(std::abs(v.gap) <= v.tol);
    }
}

TEST_CASE("differential inequality holds with the branch orientation") {
    for (double qv : {1.2, 1.5, 1.8, 2.2, 2.5, 3.0}) {
        const DeformationParameter q(qv);
        for (int trial = 0; trial < 25; ++trial) {
            const std::uint64_t seed = derive_seed(
                4400 + static_cast<std::uint64_t>(qv * 10), static_cast<std::uint64_t>(trial));
            const IsometryFamily fam =
                make_isometry_family(2, 3, derive_seed(seed, 1), Completeness::exact);
            const FunctionalPoint x = random_point(2, 3, 0.1, 10.0, derive_seed(seed, 2));
            const FunctionalPoint h = random_point(2, 3, 0.1, 10.0, derive_seed(seed, 3));
            REQUIRE(check_differential_inequality(fam, x, h, q).holds);
        }
    }
}

TEST_CASE("directional derivative agrees with a 1-D finite difference") {
    for (double qv : {1.0, 1.5, 2.5}) {
        const DeformationParameter q(qv);
        const IsometryFamily fam = make_isometry_family(2, 3, 451, Completeness::exact);
        const FunctionalPoint x = random_point(2, 3, 0.2, 5.0, 457);
        const FunctionalPoint h = random_point(2, 3, 0.2, 5.0, 461);

        const double analytic = phi_directional_derivative(fam, x, h, q);
        const double t = constants::fd_step;
        auto shifted = [&](double tt) {
            std::vector<PositiveDefiniteMatrix> ms;
            for (int i = 0; i < x.size(); ++i)
                ms.emplace_back(x.matrix(i).base() + tt * h.matrix(i).base());
            return phi(fam, FunctionalPoint(ms), q);
        };
        const double fd = (shifted(t) - shifted(-t)) / (2.0 * t);
        REQUIRE(test::rel_diff(analytic, fd) < 1e-6);
    }
}

TEST_CASE("check_corollary6: B = A collapses to the Euler relation") {
    for (double qv : {1.3, 2.0, 2.7}) {
        const DeformationParameter q(qv);
        const IsometryFamily fam = make_isometry_family(2, 3, 463, Completeness::exact);
        const FunctionalPoint a = random_point(2, 3, 0.1, 10.0, 467);
        const InequalityVerdict v = check_corollary6(fam, a, a, q);
        REQUIRE(std::abs(v.gap) <= 1e-8 * v.scale);
    }
}

TEST_CASE("check_corollary6: q = 2 reduces both sides to phi(B)") {
    const DeformationParameter q(2.0);
    const IsometryFamily fam = make_isometry_family(2, 3, 479, Completeness::exact);
    const FunctionalPoint a = random_point(2, 3, 0.1, 10.0, 487);
    const FunctionalPoint b = random_point(2, 3, 0.1, 10.0, 491);
    const InequalityVerdict v = check_corollary6(fam, a, b, q);
    REQUIRE(std::abs(v.gap) <= v.tol);
    REQUIRE(test::rel_diff(v.lhs, phi(fam, b, q)) < 1e-10);
}

TEST_CASE("check_corollary6 holds with the branch orientation") {
    for (double qv : {1.3, 2.7}) {
        const DeformationParameter q(qv);
        for (int trial = 0; trial < 40; ++trial) {
            const std::uint64_t seed = derive_seed(
                4900 + static_cast<std::uint64_t>(qv * 10), static_cast<std::uint64_t>(trial));
            const IsometryFamily fam =
                make_isometry_family(2, 3, derive_seed(seed, 1), Completeness::exact);
            const FunctionalPoint a = random_point(2, 3, 0.1, 10.0, derive_seed(seed, 2));
            const FunctionalPoint b = random_point(2, 3, 0.1, 10.0, derive_seed(seed, 3));
            REQUIRE(check_corollary6(fam, a, b, q).holds);
        }
    }
}

TEST_CASE("decoupled bound: eps -> 0 recovers the Golden-Thompson right side") {
    for (double qv : {1.5, 2.5}) {
        const DeformationParameter q(qv);
        const auto l1 = seeded_pd(4, 521, 0.1, 5.0);
        const auto l2 = seeded_pd(4, 523, 0.1, 5.0);
        const auto [lhs, rhs] = theorem1_sides(l1, l2, q);
        const double r_small = decoupled_rhs(l1, l2, q, DecouplingParameter(1e-8));
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        REQUIRE(std::abs(r_small - rhs) <= 1e-6 * scale);
    }
}

TEST_CASE("decoupled bound: q = 2 right side is eps-independent") {
    const DeformationParameter q(2.0);
    const auto l1 = seeded_pd(3, 541, 0.1, 5.0);
    const auto l2 = seeded_pd(3, 547, 0.1, 5.0);
    const double expected = trace(l1.base()) + trace(l2.base()) + 3.0;
    for (double e : {0.1, 0.5, 0.9}) {
        const double r = decoupled_rhs(l1, l2, q, DecouplingParameter(e));
        REQUIRE(r == Catch::Approx(expected).epsilon(1e-12));
        const InequalityVerdict v = decoupled_bound(l1, l2, q, DecouplingParameter(e));
        REQUIRE(std::abs(v.gap) <= v.tol);
    }
}

TEST_CASE("decoupled bound holds across eps and q") {
    for (double qv : {1.0, 1.5, 2.5, 3.0}) {
        const DeformationParameter q(qv);
        for (int trial = 0; trial < 15; ++trial) {
            const std::uint64_t seed = derive_seed(
                5500 + static_cast<std::uint64_t>(qv * 10), static_cast<std::uint64_t>(trial));
            const auto l1 = seeded_pd(3, derive_seed(seed, 1), 0.1, 5.0);
            const auto l2 = seeded_pd(3, derive_seed(seed, 2), 0.1, 5.0);
            for (double e : {0.1, 0.5, 0.9, 1e-4})
                REQUIRE(decoupled_bound(l1, l2, q, DecouplingParameter(e)).holds);
        }
    }
    REQUIRE_THROWS_AS(DecouplingParameter(0.0), std::domain_error);
    REQUIRE_THROWS_AS(DecouplingParameter(1.0), std::domain_error);
}

TEST_CASE("scalar eps profile: increasing below q = 2, decreasing above") {
    std::vector<double> grid;
    for (double e = 0.02; e < 0.9; e += 0.02) grid.push_back(e);

    const auto inc = decoupling_scalar_profile(1.0, DeformationParameter(1.5), grid);
    for (std::size_t i = 1; i < inc.size(); ++i) REQUIRE(inc[i] > inc[i - 1]);

    // Stated direction for the convex branch.
    const auto dec = decoupling_scalar_profile(1.0, DeformationParameter(2.5), grid);
    for (std::size_t i = 1; i < dec.size(); ++i) REQUIRE(dec[i] < dec[i - 1]);
}

TEST_CASE("decoupling limit: q = 2 deviation equals eps exactly") {
    const auto l2 = seeded_pd(3, 571, 0.1, 5.0);
    const std::vector<double> grid = {1e-1, 1e-2, 1e-3};
    const DecayProfile p = decoupling_limit_check(l2, DeformationParameter(2.0), grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        REQUIRE(p.deviations[i] == Catch::Approx(grid[i]).epsilon(1e-10));
}

TEST_CASE("decoupling limit: scalar pinned value and matrix decay") {
    // dim = 1, l2 = 1, q = 1.5, eps = 1e-4.
    const PositiveDefiniteMatrix one(SymmetricMatrix{{1.0}});
    const std::vector<double> single = {1e-4};
    const DecayProfile scalar =
        decoupling_limit_check(one, DeformationParameter(1.5), single);
    REQUIRE(scalar.deviations[0] <= 1e-3);

    const auto l2 = seeded_pd(4, 577, 0.1, 5.0);
    const std::vector<double> grid = {1e-2, 1e-3, 1e-4};
    const DecayProfile p = decoupling_limit_check(l2, DeformationParameter(2.5), grid);
    REQUIRE(p.deviations[0] > p.deviations[1]);
    REQUIRE(p.deviations[1] > p.deviations[2]);
    REQUIRE(p.loglog_slope == Catch::Approx(1.0).margin(0.2));

    REQUIRE_THROWS_AS(
        decoupling_limit_check(l2, DeformationParameter(2.5), std::vector<double>{1e-3, 1e-2}),
        std::invalid_argument);
}
