#include "permbound/dimer.hpp"

#include <cmath>
#include <string>

#include "permbound/error.hpp"
#include "permbound/exact.hpp"
#include "permbound/numeric.hpp"

namespace permbound {

DimerInstance::DimerInstance(std::size_t n_, std::size_t k_, std::size_t m_, Matrix matrix_)
    : n(n_), k(k_), m(m_), matrix(std::move(matrix_)) {
    if (matrix.rows() != n || matrix.cols() != n)
        throw DimensionError("DimerInstance: matrix is not n x n");
    if (m < 1 || m > n) throw DomainError("DimerInstance: m outside [1, n]");
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t row = 0, col = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double r = matrix(i, j), c = matrix(j, i);
            if (r != std::floor(r) || c != std::floor(c))
                throw DomainError("DimerInstance: entries must be integers");
            row += static_cast<std::uint64_t>(r);
            col += static_cast<std::uint64_t>(c);
        }
        if (row != k || col != k) throw DomainError("DimerInstance: line sums differ from k");
    }
}

Matrix sample_lambda(std::size_t k, std::size_t n, Rng& rng) {
    if (k < 1 || n < 1) throw DomainError("sample_lambda: k and n must be positive");
    const auto pi = rng.permutation(k * n);
    std::vector<double> a(n * n, 0.0);
    for (std::size_t r = 0; r < k * n; ++r) a[(r % n) * n + (pi[r] % n)] += 1.0;
    return Matrix(n, n, std::move(a));
}

double friedland_lower_pa1(std::size_t n, std::size_t m, std::size_t k) {
    if (n < 1 || k < 1) throw DomainError("friedland_lower_pa1: n and k must be positive");
    if (m < 1 || m > n) throw DomainError("friedland_lower_pa1: m outside [1, n]");
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    const double p = static_cast<double>(m) / nn;
    const double q = 1.0 - p;  // n q = n - m is the border size
    const double inv = 1.0 - 1.0 / nn;
    return nn * xlogy(kk - p, (kk - p) / kk)      //
           + 2.0 * nn * nn * q * xlogx(inv)       //
           - nn * p * std::log(p / kk)            //
           + 2.0 * nn * q * std::log(nn)          //
           - 2.0 * std::lgamma(nn * q + 1.0);
}

double friedland_limit_beta(double p, std::size_t k) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("friedland_limit_beta: p outside [0, 1]");
    if (k < 1) throw DomainError("friedland_limit_beta: k must be positive");
    const double kk = static_cast<double>(k);
    // p ln(k/p) = p ln k - p ln p
    return p * std::log(kk) - xlogx(p) - 2.0 * xlogx(1.0 - p) + xlogy(kk - p, 1.0 - p / kk);
}

double proposition_friedland_check(std::span<const double> p) {
    if (p.empty()) throw DomainError("proposition_friedland_check: empty vector");
    double lhs = 0.0, sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError("proposition_friedland_check: entry outside [0, 1]");
        lhs += bethe_term(v);
        sum += v;
    }
    const double k = static_cast<double>(p.size());
    const double b = std::min(sum / k, 1.0);
    return lhs - k * bethe_term(b);
}

double log_expected_per_m(std::size_t n, std::size_t m, std::size_t k) {
    if (m < 1 || m > n || k < 1) throw DomainError("log_expected_per_m: bad arguments");
    const double nn = double(n), mm = double(m), kk = double(k);
    const double log_binom =
        std::lgamma(nn + 1.0) - std::lgamma(mm + 1.0) - std::lgamma(nn - mm + 1.0);
    return 2.0 * log_binom + std::lgamma(mm + 1.0) + 2.0 * mm * std::log(kk) +
           std::lgamma(kk * nn - mm + 1.0) - std::lgamma(kk * nn + 1.0);
}

DimerBoundReport dimer_bound_report(const DimerInstance& inst) {
    DimerBoundReport r;
    r.log_per_m = per_m(inst.matrix, inst.m).log_value();
    r.log_lower_pa1 = friedland_lower_pa1(inst.n, inst.m, inst.k);
    r.p = inst.p();
    r.limit_beta = friedland_limit_beta(r.p, inst.k);
    return r;
}

std::vector<BetaEstimate> empirical_beta(std::size_t k, double p,
                                         std::span<const std::size_t> n_list,
                                         std::size_t samples, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("empirical_beta: p outside [0, 1]");
    if (samples < 1) throw DomainError("empirical_beta: samples must be positive");
    std::vector<BetaEstimate> out;
    for (std::size_t n : n_list) {
        if (n < 1) throw DomainError("empirical_beta: n must be positive");
        const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(p * double(n))));
        if (2 * n - m > kRyserMaxN)
            throw SizeLimitError("empirical_beta: n = " + std::to_string(n) +
                                 " exceeds the Per_m budget");
        std::vector<double> logs(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            Rng rng(derive_seed(seed, (std::uint64_t(n) << 32) + i));
            logs[i] = per_m(sample_lambda(k, n, rng), m).log_value();
        }
        out.push_back({n, m, log_mean_exp(logs) / double(n)});
    }
    return out;
}

}  // namespace permbound
