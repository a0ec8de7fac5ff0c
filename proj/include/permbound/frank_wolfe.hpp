#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace permbound {

// A concave objective over doubly stochastic n x n matrices, row-major.
struct ConcaveObjective {
    std::function<double(std::span<const double> q)> value;
    // Writes the gradient at q into `grad`; entries may be +-inf at the boundary.
    std::function<void(std::span<const double> q, std::span<double> grad)> gradient;
};

// A permutation matrix sigma (row i -> column sigma[i]) with its convex weight.
struct Atom {
    std::vector<std::size_t> sigma;
    double weight = 0.0;
};

struct FrankWolfeOptions {
    std::size_t max_iter = 10'000;
    double gap_tol = 1e-9;
};

struct FrankWolfeResult {
    std::vector<double> point;
    double objective = 0.0;
    std::size_t iterations = 0;
    double gap = 0.0;                  // last Frank-Wolfe duality gap
    bool converged = false;            // gap <= gap_tol
    std::vector<double> trace;         // objective after each iteration, starting value first
    std::size_t active_atoms = 0;
};

// Greedy Birkhoff-von Neumann decomposition of a doubly stochastic matrix.
// Mass below `drop_tol` per entry is discarded and the weights renormalized.
std::vector<Atom> birkhoff_decomposition(std::span<const double> q, std::size_t n,
                                         double drop_tol = 1e-14);

// Pairwise Frank-Wolfe over the Birkhoff polytope restricted to `allowed`
// entries (allowed[k] != 0). The iterate is kept as a convex combination of
// permutation matrices; each step moves weight from the active atom with the
// worst gradient score to the max-weight assignment of the gradient. Steps use
// an exact line search by bisection on the directional derivative. Every atom
// in `start` must lie on `allowed`.
FrankWolfeResult frank_wolfe(std::vector<Atom> start, std::size_t n,
                             std::span<const char> allowed, const ConcaveObjective& objective,
                             const FrankWolfeOptions& options = {});

}  // namespace permbound
