#pragma once

#include <cstddef>
#include <vector>

#include "permbound/error.hpp"
#include "permbound/matrix.hpp"

namespace permbound {

inline constexpr double kSinkhornTol = 1e-9;
inline constexpr std::size_t kSinkhornMaxIter = 10'000;

// Output of Sinkhorn scaling: B = diag(x) A diag(y), near doubly stochastic.
struct ScalingResult {
    std::vector<double> row_factors;  // x_i
    std::vector<double> col_factors;  // y_j
    Matrix scaled;                    // b_ij = x_i a_ij y_j
    double residual = 0.0;            // max row/column sum deviation of `scaled`
    std::size_t iterations = 0;
    double log_factor_product = 0.0;  // sum ln x_i + sum ln y_j
};

// Sinkhorn ran out of iterations; the partial scaling is kept.
class ScalingNonConvergence : public NonConvergenceError {
public:
    explicit ScalingNonConvergence(ScalingResult partial);
    const ScalingResult& partial() const noexcept { return partial_; }

private:
    ScalingResult partial_;
};

// Alternate row then column normalization until the residual is <= tol.
// Factors accumulate in the log domain. Throws ZeroPermanentError when the
// support has no perfect matching and ScalingNonConvergence after max_iter
// full passes.
ScalingResult sinkhorn_scale(const Matrix& a, double tol = kSinkhornTol,
                             std::size_t max_iter = kSinkhornMaxIter);

// |ln Per(A) - (ln Per(B) - log_factor_product)|, both permanents by Ryser.
double scaling_relation_check(const Matrix& a, const ScalingResult& r);

}  // namespace permbound
