#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace permbound {

// Seedable generator with platform-independent derived distributions.
// std::mt19937_64's raw stream is fixed by the standard; the distributions in
// <random> are not, so the helpers below are implemented here. Bump
// kRngVersion whenever any derived stream changes.
inline constexpr int kRngVersion = 1;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    // Uniform on (0, 1].
    double uniform_positive() { return 1.0 - uniform(); }
    // Uniform integer in [0, bound), unbiased by rejection.
    std::uint64_t below(std::uint64_t bound);
    // Exponential(1), for Dirichlet sampling.
    double exponential() { return -std::log(uniform_positive()); }
    // Uniform random permutation of 0..n-1 by Fisher-Yates.
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::mt19937_64 engine_;
};

// Independent stream for member `index` of an ensemble seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace permbound
