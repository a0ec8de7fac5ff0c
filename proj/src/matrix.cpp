#include "permbound/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "permbound/error.hpp"

namespace permbound {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0)
        throw DimensionError("matrix must have at least one row and one column");
    if (data_.size() != rows_ * cols_)
        throw DimensionError("matrix entry count " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
    for (double v : data_) {
        if (!std::isfinite(v)) throw DomainError("matrix entries must be finite");
        if (v < 0.0) throw DomainError("matrix entries must be nonnegative");
    }
}

Matrix Matrix::identity(std::size_t n) {
    return generate(n, n, [](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; });
}

Matrix Matrix::filled(std::size_t rows, std::size_t cols, double value) {
    return Matrix(rows, cols, std::vector<double>(rows * cols, value));
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    return generate(diag.size(), diag.size(),
                    [&](std::size_t i, std::size_t j) { return i == j ? diag[i] : 0.0; });
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DimensionError("matrix must have at least one row");
    const std::size_t cols = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw DimensionError("ragged matrix rows");
        data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), cols, std::move(data));
}

Matrix Matrix::generate(std::size_t rows, std::size_t cols,
                        const std::function<double(std::size_t, std::size_t)>& f) {
    std::vector<double> data(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) data[i * cols + j] = f(i, j);
    return Matrix(rows, cols, std::move(data));
}

double Matrix::max_entry() const noexcept { return *std::max_element(data_.begin(), data_.end()); }

bool Matrix::is_zero_one() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

Matrix Matrix::transposed() const {
    return generate(cols_, rows_, [&](std::size_t i, std::size_t j) { return (*this)(j, i); });
}

Matrix Matrix::permuted(std::span<const std::size_t> row_perm,
                        std::span<const std::size_t> col_perm) const {
    if (row_perm.size() != rows_ || col_perm.size() != cols_)
        throw DimensionError("permutation length does not match matrix shape");
    return generate(rows_, cols_,
                    [&](std::size_t i, std::size_t j) { return (*this)(row_perm[i], col_perm[j]); });
}

Matrix Matrix::scaled(double c) const {
    return map([c](double v) { return c * v; });
}

Matrix Matrix::with_row_scaled(std::size_t i, double c) const {
    std::vector<double> data = data_;
    for (std::size_t j = 0; j < cols_; ++j) data[i * cols_ + j] *= c;
    return Matrix(rows_, cols_, std::move(data));
}

Matrix Matrix::map(const std::function<double(double)>& f) const {
    std::vector<double> data(data_.size());
    std::transform(data_.begin(), data_.end(), data.begin(), f);
    return Matrix(rows_, cols_, std::move(data));
}

void require_square(const Matrix& a, const char* what) {
    if (!a.is_square())
        throw DimensionError(std::string(what) + " requires a square matrix, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

StochasticityReport classify(const Matrix& a, double tol, bool check_doubly) {
    if (!(tol > 0.0)) throw DomainError("classify: tolerance must be positive");
    if (check_doubly) require_square(a, "doubly stochastic check");
    StochasticityReport r;
    std::vector<double> col_sums(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += a(i, j);
            col_sums[j] += a(i, j);
        }
        r.row_sum_deviation = std::max(r.row_sum_deviation, std::abs(s - 1.0));
    }
    for (double s : col_sums) r.col_sum_deviation = std::max(r.col_sum_deviation, std::abs(s - 1.0));
    r.is_row_stochastic = r.row_sum_deviation <= tol;
    r.is_doubly_stochastic =
        a.is_square() && r.is_row_stochastic && r.col_sum_deviation <= tol;
    return r;
}

namespace {

// Hopcroft-Karp on the bipartite support graph; rows on the left.
class HopcroftKarp {
public:
    explicit HopcroftKarp(const Matrix& a) : n_(a.rows()), adj_(a.rows()) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                if (a(i, j) > 0.0) adj_[i].push_back(j);
        match_row_.assign(n_, kFree);
        match_col_.assign(a.cols(), kFree);
        dist_.assign(n_, 0);
    }

    std::size_t run() {
        std::size_t size = 0;
        while (bfs())
            for (std::size_t i = 0; i < n_; ++i)
                if (match_row_[i] == kFree && dfs(i)) ++size;
        return size;
    }

    const std::vector<std::size_t>& row_matches() const { return match_row_; }

private:
    static constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
    static constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

    bool bfs() {
        std::queue<std::size_t> q;
        for (std::size_t i = 0; i < n_; ++i) {
            if (match_row_[i] == kFree) {
                dist_[i] = 0;
                q.push(i);
            } else {
                dist_[i] = kUnreached;
            }
        }
        bool found_free = false;
        while (!q.empty()) {
            const std::size_t i = q.front();
            q.pop();
            for (std::size_t j : adj_[i]) {
                const std::size_t k = match_col_[j];
                if (k == kFree) {
                    found_free = true;
                } else if (dist_[k] == kUnreached) {
                    dist_[k] = dist_[i] + 1;
                    q.push(k);
                }
            }
        }
        return found_free;
    }

    bool dfs(std::size_t i) {
        for (std::size_t j : adj_[i]) {
            const std::size_t k = match_col_[j];
            if (k == kFree || (dist_[k] == dist_[i] + 1 && dfs(k))) {
                match_row_[i] = j;
                match_col_[j] = i;
                return true;
            }
        }
        dist_[i] = kUnreached;
        return false;
    }

    std::size_t n_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_row_;
    std::vector<std::size_t> match_col_;
    std::vector<std::size_t> dist_;
};

}  // namespace

std::vector<std::size_t> support_perfect_matching(const Matrix& a) {
    require_square(a, "perfect matching");
    HopcroftKarp hk(a);
    if (hk.run() != a.rows()) return {};
    return hk.row_matches();
}

bool support_has_perfect_matching(const Matrix& a) { return !support_perfect_matching(a).empty(); }

}  // namespace permbound
