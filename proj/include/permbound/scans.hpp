#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "permbound/matrix.hpp"

namespace permbound {

// Log ratios above this count as counterexamples.
inline constexpr double kCounterexampleTol = 1e-9;

// Falsification scan of an open conjecture. Pure data: a counterexample is
// recorded, never asserted against.
struct ConjectureScan {
    std::string conjecture;
    std::size_t instances = 0;
    double min_log_ratio = 0.0;
    double max_log_ratio = 0.0;
    std::size_t argmax = 0;
    std::vector<Matrix> counterexamples;  // first few only
    std::size_t counterexample_count = 0;
};

// ln Per(A) - ln F(A) - (n/2) ln 2 per doubly stochastic instance; the
// conjecture says this is never positive.
ConjectureScan scan_half_exponent_conjecture(std::span<const Matrix> doubly_stochastic);

// ln Per(phi0(A)) per row-stochastic instance, phi0 applied entry-wise; the
// conjecture says this is never positive.
ConjectureScan scan_phi0_conjecture(std::span<const Matrix> row_stochastic);

}  // namespace permbound
