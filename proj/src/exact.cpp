#include "permbound/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "permbound/error.hpp"
#include "permbound/numeric.hpp"

namespace permbound {

PermanentValue PermanentValue::from_log(double log_value) {
    if (std::isnan(log_value)) throw DomainError("permanent log value is NaN");
    PermanentValue v;
    if (log_value == -kInf) return v;
    v.zero_ = false;
    v.log_ = log_value;
    return v;
}

PermanentValue PermanentValue::from_linear(double value) {
    if (!(value >= 0.0)) throw DomainError("permanent value must be nonnegative");
    return value == 0.0 ? zero() : from_log(std::log(value));
}

double PermanentValue::log_value() const noexcept { return zero_ ? -kInf : log_; }

double PermanentValue::value() const noexcept { return zero_ ? 0.0 : std::exp(log_); }

namespace {

void check_size(const Matrix& a, std::size_t cap, const char* what) {
    require_square(a, what);
    if (a.rows() > cap)
        throw SizeLimitError(std::string(what) + ": n = " + std::to_string(a.rows()) +
                             " exceeds the cap of " + std::to_string(cap));
}

// Power-of-two rescaling exponent bringing the largest entry into [0.5, 1).
// Exact in binary, so integer matrices stay integer-valued up to the shift.
int rescale_exponent(const Matrix& a) {
    int e = 0;
    std::frexp(a.max_entry(), &e);
    return e;
}

// Ryser's formula on column-major `cols` (cols[j * n + i] = a_ij):
//   Per(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij
// Column subsets are visited in Gray-code order so each step adds or removes
// one column from the running row sums.
double ryser_linear(const std::vector<double>& cols, std::size_t n) {
    std::vector<double> row_sum(n, 0.0);
    CompensatedSum total;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const int bit = std::countr_zero(k);
        const std::uint64_t gray = k ^ (k >> 1);
        const double* col = cols.data() + static_cast<std::size_t>(bit) * n;
        if (gray & (std::uint64_t{1} << bit)) {
            for (std::size_t i = 0; i < n; ++i) row_sum[i] += col[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) row_sum[i] -= col[i];
        }
        double prod = 1.0;
        for (std::size_t i = 0; i < n && prod != 0.0; ++i) prod *= row_sum[i];
        total.add((std::popcount(gray) & 1) ? -prod : prod);
    }
    const double r = total.value();
    return (n & 1) ? -r : r;
}

std::vector<double> column_major(const Matrix& a, int shift) {
    const std::size_t n = a.rows();
    std::vector<double> cols(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cols[j * n + i] = std::ldexp(a(i, j), -shift);
    return cols;
}

PermanentValue ryser_unchecked(const Matrix& a) {
    if (!support_has_perfect_matching(a)) return PermanentValue::zero();
    const std::size_t n = a.rows();
    const int shift = rescale_exponent(a);
    const double value = ryser_linear(column_major(a, shift), n);
    if (!(value > 0.0))
        throw DomainError("permanent_ryser: cancellation lost the positive permanent");
    return PermanentValue::from_log(std::log(value) +
                                    static_cast<double>(shift) * static_cast<double>(n) *
                                        std::log(2.0));
}

double log_binomial(std::size_t n, std::size_t k) {
    return std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1);
}

// Advance `idx` (strictly increasing, values < n) to the next k-combination.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t p = k; p-- > 0;) {
        if (idx[p] < n - k + p) {
            ++idx[p];
            for (std::size_t q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
            return true;
        }
    }
    return false;
}

void check_m(const Matrix& a, std::size_t m, const char* what) {
    require_square(a, what);
    if (m < 1 || m > a.rows())
        throw DomainError(std::string(what) + ": m = " + std::to_string(m) +
                          " outside [1, " + std::to_string(a.rows()) + "]");
}

}  // namespace

PermanentValue permanent_bruteforce(const Matrix& a) {
    check_size(a, kBruteForceMaxN, "permanent_bruteforce");
    const std::size_t n = a.rows();
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    double total = 0.0;
    do {
        double prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) prod *= a(i, sigma[i]);
        total += prod;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return PermanentValue::from_linear(total);
}

PermanentValue permanent_ryser(const Matrix& a) {
    check_size(a, kRyserMaxN, "permanent_ryser");
    return ryser_unchecked(a);
}

PermanentValue per_m_direct(const Matrix& a, std::size_t m) {
    check_m(a, m, "per_m_direct");
    check_size(a, kPerMDirectMaxN, "per_m_direct");
    const std::size_t n = a.rows();
    if (a.max_entry() == 0.0) return PermanentValue::zero();
    const int shift = rescale_exponent(a);

    std::vector<std::size_t> rows(m), cols(m);
    std::vector<double> sub(m * m);
    CompensatedSum total;
    std::iota(rows.begin(), rows.end(), 0);
    do {
        std::iota(cols.begin(), cols.end(), 0);
        do {
            bool any_zero_line = false;
            for (std::size_t r = 0; r < m; ++r) {
                double line = 0.0;
                for (std::size_t c = 0; c < m; ++c) {
                    const double v = std::ldexp(a(rows[r], cols[c]), -shift);
                    sub[c * m + r] = v;
                    line += v;
                }
                any_zero_line = any_zero_line || line == 0.0;
            }
            if (!any_zero_line) total.add(ryser_linear(sub, m));
        } while (next_combination(cols, n));
    } while (next_combination(rows, n));

    const double value = total.value();
    if (!(value > 0.0)) return PermanentValue::zero();
    return PermanentValue::from_log(std::log(value) + static_cast<double>(shift) *
                                                          static_cast<double>(m) * std::log(2.0));
}

Matrix per_m_border_matrix(const Matrix& a, std::size_t m) {
    check_m(a, m, "per_m_border_matrix");
    const std::size_t n = a.rows();
    const std::size_t size = 2 * n - m;
    return Matrix::generate(size, size, [&](std::size_t i, std::size_t j) {
        if (i < n && j < n) return a(i, j);
        if (i >= n && j >= n) return 0.0;
        return 1.0;
    });
}

PermanentValue per_m_via_block(const Matrix& a, std::size_t m) {
    check_m(a, m, "per_m_via_block");
    const std::size_t n = a.rows();
    if (2 * n - m > kRyserMaxN)
        throw SizeLimitError("per_m_via_block: bordered size " + std::to_string(2 * n - m) +
                             " exceeds the Ryser cap of " + std::to_string(kRyserMaxN));
    const PermanentValue border = ryser_unchecked(per_m_border_matrix(a, m));
    if (border.is_zero()) return border;
    return PermanentValue::from_log(border.log_value() - 2.0 * std::lgamma(double(n - m) + 1.0));
}

bool per_m_prefers_direct(std::size_t n, std::size_t m) {
    if (m > n) return false;
    const double log_work = 2.0 * log_binomial(n, m) + std::lgamma(double(m) + 1.0);
    return n <= kPerMDirectMaxN && log_work < std::log(1e7);
}

PermanentValue per_m(const Matrix& a, std::size_t m) {
    check_m(a, m, "per_m");
    if (per_m_prefers_direct(a.rows(), m)) return per_m_direct(a, m);
    return per_m_via_block(a, m);
}

}  // namespace permbound
