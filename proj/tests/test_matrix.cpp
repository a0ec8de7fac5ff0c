#include <doctest.h>

#include <sstream>

#include "permbound/error.hpp"
#include "permbound/exact.hpp"
#include "permbound/matrix.hpp"
#include "permbound/matrix_io.hpp"
#include "test_support.hpp"

using namespace permbound;

TEST_CASE("construction rejects bad entries") {
    CHECK_THROWS_AS(Matrix(2, 2, {1, 2, 3}), DimensionError);
    CHECK_THROWS_AS(Matrix(0, 2, {}), DimensionError);
    CHECK_THROWS_AS(Matrix(1, 2, {1.0, -0.5}), DomainError);
    CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(Matrix(1, 1, {INFINITY}), DomainError);
}

TEST_CASE("classify") {
    SUBCASE("uniform 1/3") {
        const auto r = classify(Matrix::filled(3, 3, 1.0 / 3.0), 1e-12);
        CHECK(r.is_doubly_stochastic);
        CHECK(r.is_row_stochastic);
    }
    SUBCASE("identity at any tolerance") {
        for (double tol : {1e-15, 1e-9, 0.5}) CHECK(classify(Matrix::identity(5), tol).is_doubly_stochastic);
    }
    SUBCASE("row but not column stochastic") {
        const auto r = classify(Matrix::from_rows({{0.6, 0.4}, {0.6, 0.4}}), 1e-9);
        CHECK(r.is_row_stochastic);
        CHECK_FALSE(r.is_doubly_stochastic);
        CHECK(r.col_sum_deviation == doctest::Approx(0.2));
    }
    SUBCASE("non-square") {
        const Matrix a = Matrix::filled(2, 3, 1.0 / 3.0);
        CHECK_THROWS_AS(classify(a, 1e-9), DimensionError);
        const auto r = classify(a, 1e-9, false);
        CHECK(r.is_row_stochastic);
        CHECK_FALSE(r.is_doubly_stochastic);
    }
    SUBCASE("tolerance must be positive") { CHECK_THROWS_AS(classify(Matrix::identity(2), 0.0), DomainError); }
}

TEST_CASE("classify is invariant under simultaneous row/column permutation") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(7);
        const Matrix a = Matrix::generate(n, n, [&](std::size_t, std::size_t) { return rng.uniform() * 2.0 / n; });
        const auto perm = rng.permutation(n);
        const auto r1 = classify(a, 0.3);
        const auto r2 = classify(a.permuted(perm, perm), 0.3);
        CHECK(r1.row_sum_deviation == doctest::Approx(r2.row_sum_deviation).epsilon(1e-12));
        CHECK(r1.col_sum_deviation == doctest::Approx(r2.col_sum_deviation).epsilon(1e-12));
        CHECK(r1.is_doubly_stochastic == r2.is_doubly_stochastic);
        CHECK(r1.is_row_stochastic == r2.is_row_stochastic);
    }
}

TEST_CASE("support perfect matching") {
    CHECK(support_has_perfect_matching(Matrix::identity(6)));
    CHECK_FALSE(support_has_perfect_matching(Matrix::from_rows({{1, 1, 1}, {0, 0, 0}, {1, 1, 1}})));
    // support {(1,1),(2,1),(3,2),(3,3)}: rows 1 and 2 both need column 1
    CHECK_FALSE(support_has_perfect_matching(Matrix::from_rows({{1, 0, 0}, {1, 0, 0}, {0, 1, 1}})));
    CHECK_THROWS_AS(support_has_perfect_matching(Matrix::filled(2, 3, 1.0)), DimensionError);

    const Matrix a = Matrix::from_rows({{0, 2, 0}, {0, 0, 3}, {4, 0, 0}});
    const auto sigma = support_perfect_matching(a);
    REQUIRE(sigma.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a(i, sigma[i]) > 0.0);
}

TEST_CASE("matching existence agrees with the permanent oracle for n <= 6") {
    Rng rng(5);
    int positives = 0, zeros = 0;
    for (int trial = 0; trial < 600; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        const Matrix a = testing::sparse_random(n, 0.35 + 0.4 * rng.uniform(), rng);
        const bool has = testing::laplace_permanent(a) > 0.0;
        CHECK(support_has_perfect_matching(a) == has);
        (has ? positives : zeros)++;
    }
    CHECK(positives > 50);
    CHECK(zeros > 50);
}

TEST_CASE("text and CSV formats") {
    std::istringstream text("2 3\n1 2 3\n# comment\n\n4 5 6.5\n");
    const Matrix a = read_matrix(text);
    CHECK(a.rows() == 2);
    CHECK(a.cols() == 3);
    CHECK(a(1, 2) == 6.5);

    std::istringstream csv("1,2\n3, 4\n");
    const Matrix b = read_matrix(csv);
    CHECK(b == Matrix::from_rows({{1, 2}, {3, 4}}));

    std::istringstream bad_count("2 2\n1 2\n");
    CHECK_THROWS_AS(read_matrix(bad_count), DimensionError);
    std::istringstream bad_token("1 2\n1 x\n");
    CHECK_THROWS_AS(read_matrix(bad_token), DomainError);
    std::istringstream negative("1 1\n-1\n");
    CHECK_THROWS_AS(read_matrix(negative), DomainError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_matrix(empty), DomainError);
}

TEST_CASE("writer round-trips bit-exactly with 17 significant digits") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = Matrix::generate(3, 4, [&](std::size_t, std::size_t) { return rng.uniform() * 1e3; });
        std::istringstream in(format_matrix(a));
        CHECK(read_matrix(in) == a);
    }
    CHECK(format_matrix(Matrix::from_rows({{0.1}})) == "1 1\n0.10000000000000001\n");
}
