#pragma once

#include <cstddef>

#include "permbound/matrix.hpp"

namespace permbound {

// Hard size caps of the exact routes.
inline constexpr std::size_t kBruteForceMaxN = 8;
inline constexpr std::size_t kRyserMaxN = 24;
inline constexpr std::size_t kPerMDirectMaxN = 10;

// An exact permanent held in natural-log form. Zero is an explicit marker
// rather than ln(0) so the value survives the underflow of n!/n^n-sized
// results.
class PermanentValue {
public:
    static PermanentValue zero() { return PermanentValue(); }
    static PermanentValue from_log(double log_value);
    // value must be >= 0; 0 maps to the zero marker.
    static PermanentValue from_linear(double value);

    bool is_zero() const noexcept { return zero_; }
    // -inf for zero.
    double log_value() const noexcept;
    double value() const noexcept;

private:
    PermanentValue() = default;
    bool zero_ = true;
    double log_ = 0.0;
};

// Sum over all n! permutations, n <= 8.
PermanentValue permanent_bruteforce(const Matrix& a);

// Ryser inclusion-exclusion over column subsets in Gray-code order, n <= 24.
PermanentValue permanent_ryser(const Matrix& a);

// Sum of the permanents of all m x m submatrices, by enumeration (n <= 10).
PermanentValue per_m_direct(const Matrix& a, std::size_t m);

// Per_m(A) = Per(L) / ((n-m)!)^2 with L = [[A, J], [J^T, 0]], J the
// n x (n-m) all-ones block. Requires 2n - m <= 24.
PermanentValue per_m_via_block(const Matrix& a, std::size_t m);

// The bordered matrix L used by per_m_via_block.
Matrix per_m_border_matrix(const Matrix& a, std::size_t m);

// True when per_m takes the enumeration route for these sizes.
bool per_m_prefers_direct(std::size_t n, std::size_t m);

// Picks per_m_direct when binom(n,m)^2 * m! < 1e7 (and n <= 10), else the
// bordered route.
PermanentValue per_m(const Matrix& a, std::size_t m);

}  // namespace permbound
