#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "permbound/matrix.hpp"
#include "permbound/random.hpp"

namespace permbound {

// Entries uniform on (0, 1].
Matrix random_positive(std::size_t n, Rng& rng);
// Sinkhorn image (residual <= 1e-13) of random_positive.
Matrix random_doubly_stochastic(std::size_t n, Rng& rng);
// random_positive with rows normalized.
Matrix random_row_stochastic(std::size_t n, Rng& rng);
// Nonnegative matrix with some zero entries and a random magnitude per row.
Matrix random_nonnegative(std::size_t n, Rng& rng);
// Dirichlet-like stochastic vector; `skew` >= 1 raises the exponential draws
// to that power before normalizing, concentrating mass on few entries.
std::vector<double> random_stochastic_vector(std::size_t dim, Rng& rng, double skew = 1.0);

// Block diagonal with n/2 all-ones 2x2 blocks (n even).
Matrix block_a1(std::size_t n);
// Bipartite adjacency of the 2n-cycle: a_ii = a_{i,i+1 mod n} = 1.
Matrix cycle_a2(std::size_t n);
// Each entry 1 with probability q, else 0.
Matrix zero_one_density(std::size_t n, double q, Rng& rng);

// Named ensembles for the CLI: ds-random, lambda-k, block-a1, cycle-a2,
// zero-one-density(q), positive-random, row-stochastic.
class Ensemble {
public:
    enum class Kind { ds_random, lambda_k, block_a1, cycle_a2, zero_one_density, positive_random,
                      row_stochastic };

    static Ensemble parse(const std::string& text, std::size_t k = 2);

    Kind kind() const noexcept { return kind_; }
    std::string name() const;
    Matrix make(std::size_t n, Rng& rng) const;

private:
    Ensemble(Kind kind, double q, std::size_t k) : kind_(kind), q_(q), k_(k) {}
    Kind kind_;
    double q_;
    std::size_t k_;
};

}  // namespace permbound
