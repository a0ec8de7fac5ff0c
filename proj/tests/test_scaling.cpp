#include <doctest.h>

#include <cmath>
#include <numeric>

#include "permbound/ensembles.hpp"
#include "permbound/error.hpp"
#include "permbound/exact.hpp"
#include "permbound/scaling.hpp"
#include "test_support.hpp"

using namespace permbound;
using permbound::testing::laplace_permanent;

namespace {

double max_line_deviation(const Matrix& b) {
    const std::size_t n = b.rows();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0, c = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            r += b(i, j);
            c += b(j, i);
        }
        worst = std::max({worst, std::abs(r - 1.0), std::abs(c - 1.0)});
    }
    return worst;
}

}  // namespace

TEST_CASE("doubly stochastic input needs no iterations") {
    const auto r = sinkhorn_scale(Matrix::filled(4, 4, 0.25));
    CHECK(r.iterations == 0);
    CHECK(r.log_factor_product == doctest::Approx(0.0).scale(1.0));
    CHECK(r.residual <= 1e-15);
    const auto p = sinkhorn_scale(Matrix::identity(5));
    CHECK(p.iterations == 0);
}

TEST_CASE("diagonal input") {
    const auto r = sinkhorn_scale(Matrix::diagonal(std::vector<double>{2.0, 8.0}));
    CHECK(r.log_factor_product == doctest::Approx(-std::log(16.0)).epsilon(1e-12));
    CHECK(r.scaled(0, 0) == doctest::Approx(1.0));
    CHECK(r.scaled(1, 1) == doctest::Approx(1.0));
    CHECK(r.scaled(0, 1) == 0.0);
}

TEST_CASE("factors reproduce the scaled matrix and the permanent relation") {
    Rng rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.below(7);
        // diagonal plus cyclic shift keeps the support fully indecomposable
        const Matrix raw = testing::sparse_random(n, trial % 2 ? 0.5 : 0.0, rng);
        const Matrix a = Matrix::generate(n, n, [&](std::size_t i, std::size_t j) {
            return (j == i || j == (i + 1) % n) ? raw(i, j) + 0.5 : raw(i, j);
        });
        const auto r = sinkhorn_scale(a, 1e-10, 1'000'000);
        CHECK(max_line_deviation(r.scaled) <= 1e-10 * 1.0001);
        CHECK(r.residual == doctest::Approx(max_line_deviation(r.scaled)).scale(1e-12));
        double lfp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lfp += std::log(r.row_factors[i]) + std::log(r.col_factors[i]);
            for (std::size_t j = 0; j < n; ++j)
                CHECK(r.scaled(i, j) ==
                      doctest::Approx(r.row_factors[i] * a(i, j) * r.col_factors[j]).epsilon(1e-8));
        }
        CHECK(lfp == doctest::Approx(r.log_factor_product).scale(1.0).epsilon(1e-8));
        // Per(B) = Per(A) * prod x * prod y, checked against the Laplace oracle
        const double lhs = std::log(laplace_permanent(r.scaled));
        CHECK(lhs == doctest::Approx(std::log(laplace_permanent(a)) + r.log_factor_product).scale(1.0).epsilon(1e-6));
        CHECK(scaling_relation_check(a, r) < 1e-8);
    }
}

TEST_CASE("zero permanent support") {
    const Matrix a = Matrix::from_rows({{1, 1, 0}, {1, 1, 0}, {1, 1, 0}});
    CHECK_THROWS_AS(sinkhorn_scale(a), ZeroPermanentError);
    CHECK_THROWS_AS(sinkhorn_scale(a), DomainError);
}

TEST_CASE("non-convergence keeps the partial scaling") {
    // positive permanent but the off-diagonal entry must vanish in the limit
    const Matrix a = Matrix::from_rows({{1, 1}, {0, 1}});
    try {
        sinkhorn_scale(a, 1e-12, 50);
        FAIL("expected ScalingNonConvergence");
    } catch (const ScalingNonConvergence& e) {
        CHECK(e.partial().iterations == 50);
        CHECK(e.partial().residual > 1e-12);
        CHECK(e.partial().residual < 0.1);
    }
}

TEST_CASE("row permutation commutes with scaling") {
    Rng rng(13);
    const std::size_t n = 6;
    const Matrix a = random_positive(n, rng);
    const auto perm = rng.permutation(n);
    std::vector<std::size_t> id(n);
    std::iota(id.begin(), id.end(), 0);
    const auto r = sinkhorn_scale(a, 1e-12, 100000);
    const auto rp = sinkhorn_scale(a.permuted(perm, id), 1e-12, 100000);
    CHECK(rp.log_factor_product == doctest::Approx(r.log_factor_product).epsilon(1e-9));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            CHECK(rp.scaled(i, j) == doctest::Approx(r.scaled(perm[i], j)).epsilon(1e-8));
}

TEST_CASE("residual shrinks as the budget grows") {
    Rng rng(21);
    const Matrix a = testing::sparse_random(7, 0.3, rng);
    if (laplace_permanent(a) == 0.0) return;
    double previous = INFINITY;
    for (std::size_t iters : {1u, 2u, 4u, 8u, 16u, 32u}) {
        double res;
        try {
            res = sinkhorn_scale(a, 1e-14, iters).residual;
        } catch (const ScalingNonConvergence& e) {
            res = e.partial().residual;
        }
        CHECK(res <= previous * (1 + 1e-12));
        previous = res;
    }
}
