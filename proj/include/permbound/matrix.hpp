#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace permbound {

// Default tolerance for row/column sum checks. Matches the default Sinkhorn
// residual target so a scaled matrix classifies as doubly stochastic.
inline constexpr double kStochasticTol = 1e-9;

// Dense nonnegative real matrix, row-major. Immutable once built: every entry
// is checked to be finite and >= 0 at construction.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix filled(std::size_t rows, std::size_t cols, double value);
    static Matrix diagonal(std::span<const double> diag);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix generate(std::size_t rows, std::size_t cols,
                           const std::function<double(std::size_t, std::size_t)>& f);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<const double> entries() const noexcept { return data_; }

    double max_entry() const noexcept;
    bool is_zero_one() const noexcept;

    Matrix transposed() const;
    // result(i, j) = (*this)(row_perm[i], col_perm[j])
    Matrix permuted(std::span<const std::size_t> row_perm,
                    std::span<const std::size_t> col_perm) const;
    Matrix scaled(double c) const;
    Matrix with_row_scaled(std::size_t i, double c) const;
    // Entry-wise f(a_ij); the result is validated like any other matrix.
    Matrix map(const std::function<double(double)>& f) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

struct StochasticityReport {
    double row_sum_deviation = 0.0;  // max_i |sum_j a_ij - 1|
    double col_sum_deviation = 0.0;  // max_j |sum_i a_ij - 1|
    bool is_row_stochastic = false;
    bool is_doubly_stochastic = false;
};

// Row/column sum deviations of `a` from 1. With `check_doubly` a non-square
// input is a DimensionError; without it, non-square inputs are only ever
// reported as row-stochastic.
StochasticityReport classify(const Matrix& a, double tol = kStochasticTol,
                             bool check_doubly = true);

void require_square(const Matrix& a, const char* what);

// Perfect matching in the bipartite graph {(i, j) : a_ij > 0}, by Hopcroft-Karp.
// Returns the row -> column assignment, or an empty vector when none exists.
std::vector<std::size_t> support_perfect_matching(const Matrix& a);

bool support_has_perfect_matching(const Matrix& a);

}  // namespace permbound
