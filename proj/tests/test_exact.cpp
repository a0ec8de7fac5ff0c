#include <doctest.h>

#include <cmath>
#include <numeric>

#include "permbound/ensembles.hpp"
#include "permbound/error.hpp"
#include "permbound/exact.hpp"
#include "test_support.hpp"

using namespace permbound;
using permbound::testing::laplace_permanent;
using permbound::testing::relative_error;

namespace {

// Per_m by subset enumeration with the Laplace oracle on every submatrix.
double per_m_oracle(const Matrix& a, std::size_t m) {
    const std::size_t n = a.rows();
    double total = 0.0;
    for (unsigned rows = 0; rows < (1u << n); ++rows) {
        if (std::popcount(rows) != static_cast<int>(m)) continue;
        for (unsigned cols = 0; cols < (1u << n); ++cols) {
            if (std::popcount(cols) != static_cast<int>(m)) continue;
            std::vector<double> sub;
            for (std::size_t i = 0; i < n; ++i)
                if (rows >> i & 1)
                    for (std::size_t j = 0; j < n; ++j)
                        if (cols >> j & 1) sub.push_back(a(i, j));
            total += laplace_permanent(Matrix(m, m, sub));
        }
    }
    return total;
}

}  // namespace

TEST_CASE("PermanentValue zero marker") {
    const auto z = PermanentValue::zero();
    CHECK(z.is_zero());
    CHECK(z.log_value() == -INFINITY);
    CHECK(z.value() == 0.0);
    CHECK(PermanentValue::from_linear(0.0).is_zero());
    CHECK(PermanentValue::from_log(-INFINITY).is_zero());
    const auto v = PermanentValue::from_linear(2.0);
    CHECK_FALSE(v.is_zero());
    CHECK(v.log_value() == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(PermanentValue::from_linear(-1.0), DomainError);
}

TEST_CASE("brute force permanent") {
    CHECK(permanent_bruteforce(Matrix::from_rows({{3.5}})).value() == doctest::Approx(3.5));
    // n!/n^n on the uniform matrix
    CHECK(permanent_bruteforce(Matrix::filled(3, 3, 1.0 / 3.0)).value() == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(permanent_bruteforce(cycle_a2(6)).value() == doctest::Approx(2.0));
    CHECK(permanent_bruteforce(Matrix::from_rows({{1, 0}, {1, 0}})).is_zero());
    CHECK_THROWS_AS(permanent_bruteforce(Matrix::identity(9)), SizeLimitError);
    CHECK_THROWS_AS(permanent_bruteforce(Matrix::filled(2, 3, 1.0)), DimensionError);
}

TEST_CASE("Ryser permanent") {
    CHECK(permanent_ryser(Matrix::identity(10)).log_value() == doctest::Approx(0.0));
    CHECK(permanent_ryser(block_a1(8)).value() == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(permanent_ryser(Matrix::from_rows({{1, 1, 0}, {1, 1, 0}, {1, 1, 0}})).is_zero());
    CHECK_THROWS_AS(permanent_ryser(Matrix::identity(25)), SizeLimitError);
    // overflow-prone magnitudes survive the power-of-two prescale
    const double big = 1e200;
    const auto v = permanent_ryser(Matrix::filled(4, 4, big));
    CHECK(v.log_value() == doctest::Approx(std::log(24.0) + 4 * std::log(big)).epsilon(1e-14));
}

TEST_CASE("Ryser agrees with brute force and the Laplace oracle, n <= 8") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(8);
        const Matrix a = testing::sparse_random(n, trial % 3 == 0 ? 0.3 : 0.0, rng);
        const double oracle = laplace_permanent(a);
        const auto brute = permanent_bruteforce(a);
        const auto ryser = permanent_ryser(a);
        REQUIRE(brute.is_zero() == (oracle == 0.0));
        REQUIRE(ryser.is_zero() == (oracle == 0.0));
        if (oracle == 0.0) continue;
        CHECK(relative_error(brute.value(), oracle) < 1e-12);
        CHECK(relative_error(ryser.value(), brute.value()) < 1e-10);
    }
}

TEST_CASE("permanent invariances") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng.below(9);
        const Matrix a = random_positive(n, rng);
        const double base = permanent_ryser(a).log_value();
        const auto rp = rng.permutation(n), cp = rng.permutation(n);
        std::vector<std::size_t> id(n);
        std::iota(id.begin(), id.end(), 0);
        CHECK(permanent_ryser(a.permuted(rp, id)).log_value() == doctest::Approx(base).epsilon(1e-11));
        CHECK(permanent_ryser(a.permuted(id, cp)).log_value() == doctest::Approx(base).epsilon(1e-11));
        CHECK(permanent_ryser(a.transposed()).log_value() == doctest::Approx(base).epsilon(1e-11));
        // multilinearity in a row
        const double c = 0.1 + 5.0 * rng.uniform();
        const std::size_t i = rng.below(n);
        CHECK(permanent_ryser(a.with_row_scaled(i, c)).log_value() - base ==
              doctest::Approx(std::log(c)).epsilon(1e-9));
    }
}

TEST_CASE("Per_m by direct enumeration") {
    Rng rng(8);
    const Matrix a = random_positive(4, rng);
    double total = 0.0;
    for (double v : a.entries()) total += v;
    CHECK(per_m_direct(a, 1).value() == doctest::Approx(total).epsilon(1e-14));
    CHECK(per_m_direct(a, 4).log_value() == doctest::Approx(permanent_ryser(a).log_value()).epsilon(1e-13));
    // 9 row/column pairs, each 2x2 all-ones block with permanent 2
    CHECK(per_m_direct(Matrix::filled(3, 3, 1.0), 2).value() == doctest::Approx(18.0).epsilon(1e-14));
    CHECK_THROWS_AS(per_m_direct(a, 0), DomainError);
    CHECK_THROWS_AS(per_m_direct(a, 5), DomainError);
    CHECK_THROWS_AS(per_m_direct(Matrix::identity(11), 2), SizeLimitError);
    CHECK(per_m_direct(Matrix::from_rows({{1, 0}, {0, 0}}), 2).is_zero());
}

TEST_CASE("Per_m bordered route") {
    CHECK(per_m_via_block(Matrix::filled(3, 3, 1.0), 2).value() == doctest::Approx(18.0).epsilon(1e-12));
    const Matrix l = per_m_border_matrix(Matrix::filled(3, 3, 2.0), 1);
    CHECK(l.rows() == 5);
    CHECK(l(0, 4) == 1.0);
    CHECK(l(4, 4) == 0.0);
    CHECK(l(2, 2) == 2.0);
    CHECK_THROWS_AS(per_m_via_block(Matrix::identity(13), 1), SizeLimitError);

    Rng rng(91);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng.below(7);
        const Matrix a = testing::sparse_random(n, 0.2, rng);
        for (std::size_t m = 1; m <= n; ++m) {
            const auto direct = per_m_direct(a, m);
            const auto block = per_m_via_block(a, m);
            REQUIRE(direct.is_zero() == block.is_zero());
            if (direct.is_zero()) continue;
            CHECK(relative_error(block.value(), direct.value()) < 1e-8);
            if (n <= 5) CHECK(relative_error(direct.value(), per_m_oracle(a, m)) < 1e-11);
        }
        // m = n reduces to the permanent
        const auto per = permanent_ryser(a);
        if (!per.is_zero())
            CHECK(per_m_via_block(a, n).log_value() == doctest::Approx(per.log_value()).epsilon(1e-12));
    }
}

TEST_CASE("Per_m route selection") {
    const Matrix a = Matrix::filled(12, 12, 1.0);
    // binom(12,6)^2 6! is far beyond the direct budget and n > 10
    CHECK(per_m(a, 11).log_value() == doctest::Approx(per_m_via_block(a, 11).log_value()));
    CHECK(per_m(Matrix::filled(3, 3, 1.0), 2).value() == doctest::Approx(18.0));
}
