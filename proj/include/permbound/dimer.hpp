#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "permbound/matrix.hpp"
#include "permbound/random.hpp"

namespace permbound {

// A member of Lambda(k, n): nonnegative integer matrix with every row and
// column summing to k, together with a matching size m.
struct DimerInstance {
    DimerInstance(std::size_t n, std::size_t k, std::size_t m, Matrix matrix);

    std::size_t n;
    std::size_t k;
    std::size_t m;
    Matrix matrix;

    double p() const noexcept { return static_cast<double>(m) / static_cast<double>(n); }
};

struct DimerBoundReport {
    double log_per_m = 0.0;
    double log_lower_pa1 = 0.0;
    double p = 0.0;
    double limit_beta = 0.0;
};

// A(pi) = sum of the k x k grid of n x n blocks of the permutation matrix of a
// uniform pi in S_{kn}: row r of the big matrix adds one to a[r mod n][pi(r) mod n].
Matrix sample_lambda(std::size_t k, std::size_t n, Rng& rng);

// ln of the lower bound on Per_m over Lambda(k, n):
//   ((k-p)/k)^{n(k-p)} (1-1/n)^{(1-1/n) 2n^2 (1-p)}
//   / ((p/k)^{np} n^{-2n(1-p)} ((n(1-p))!)^2),   p = m/n,
// with the factorial through lgamma (interpolating when n(1-p) is fractional).
double friedland_lower_pa1(std::size_t n, std::size_t m, std::size_t k);

// p ln(k/p) - 2(1-p) ln(1-p) + (k-p) ln(1 - p/k), extended by x ln x -> 0.
double friedland_limit_beta(double p, std::size_t k);

// ln prod (1-p_i)^{1-p_i} - k (1-b) ln(1-b), b the mean of the p_i. Never
// negative beyond rounding.
double proposition_friedland_check(std::span<const double> p);

// Exact E_mu Per_m(A) over Lambda(k, n):
//   binom(n,m)^2 m! k^{2m} (kn - m)! / (kn)!, as a log.
double log_expected_per_m(std::size_t n, std::size_t m, std::size_t k);

DimerBoundReport dimer_bound_report(const DimerInstance& inst);

struct BetaEstimate {
    std::size_t n;
    std::size_t m;
    double estimate;  // (1/n) ln(mean over samples of Per_m)
};

// For each n, m = round(p n) (at least 1), average Per_m over `samples`
// mu-samples. Sample i of dimension n uses derive_seed(seed, n * 2^32 + i), so
// results do not depend on n_list order.
std::vector<BetaEstimate> empirical_beta(std::size_t k, double p,
                                         std::span<const std::size_t> n_list,
                                         std::size_t samples, std::uint64_t seed);

}  // namespace permbound
