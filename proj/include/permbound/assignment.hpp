#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace permbound {

// Linear assignment by the Hungarian method (shortest augmenting paths with
// potentials), O(n^3). `weights` is n x n row-major; returns the permutation
// sigma (row i -> column sigma[i]) maximizing sum_i weights[i][sigma[i]].
// Reentrant: all state lives on the call stack.
std::vector<std::size_t> max_weight_assignment(std::span<const double> weights, std::size_t n);

}  // namespace permbound
