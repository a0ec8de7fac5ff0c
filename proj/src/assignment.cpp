#include "permbound/assignment.hpp"

#include <limits>

#include "permbound/error.hpp"

namespace permbound {

std::vector<std::size_t> max_weight_assignment(std::span<const double> weights, std::size_t n) {
    if (weights.size() != n * n) throw DimensionError("assignment: weight matrix is not n x n");
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials u (rows), v (cols); p[j] = row matched to column j.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    auto cost = [&](std::size_t i, std::size_t j) { return -weights[(i - 1) * n + (j - 1)]; };

    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> sigma(n);
    for (std::size_t j = 1; j <= n; ++j) sigma[p[j] - 1] = j - 1;
    return sigma;
}

}  // namespace permbound
