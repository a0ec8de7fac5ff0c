#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "permbound/matrix.hpp"
#include "permbound/scaling.hpp"

namespace permbound {

// Certified interval around ln Per(A) produced by the scale-then-Bethe
// algorithm. All values are natural logs.
struct BoundReport {
    double log_lower = 0.0;
    double log_upper = 0.0;
    double log_estimate = 0.0;
    std::optional<double> log_exact;
    double scaling_residual = 0.0;
    std::size_t n = 0;
    // Sinkhorn hit max_iter; the interval was computed from the partial scaling.
    bool degraded = false;
};

struct BetheSolution {
    Matrix maximizer;  // doubly stochastic B*
    double objective = 0.0;  // CW(A, B*)
    std::size_t iterations = 0;
    double duality_gap_estimate = 0.0;
    bool converged = false;
    std::vector<double> trace;  // objective per iteration, start value first
};

// ln F(A) = sum (1 - a_ij) ln(1 - a_ij), with 0 ln 0 = 0. Entries above one
// (beyond kStochasticTol of rounding) are a DomainError.
double bethe_F(const Matrix& a);

// CW(P, Q) = sum (1 - q) ln(1 - q) - sum q ln(q / p). Returns -inf when some
// q_ij > 0 sits on p_ij = 0.
double cw_functional(const Matrix& p, const Matrix& q);

// dCW/dq_ij = -2 - ln(1 - q_ij) - ln q_ij + ln p_ij; -inf where p_ij = 0.
// Requires 0 < q_ij < 1 on the support of P.
std::vector<double> cw_gradient(const Matrix& p, const Matrix& q);

// Per(A) >= exp(CW(A, B)) for any doubly stochastic B.
double lower_bound_general(const Matrix& a, const Matrix& b, double tol = kStochasticTol);

// Scale to doubly stochastic D, then ln F(D) - sum ln x_i - sum ln y_j is both
// the estimate and the lower bound; the upper bound adds n ln 2.
BoundReport approximate_permanent(const Matrix& a, double tol = kSinkhornTol,
                                  std::size_t max_iter = kSinkhornMaxIter);

// max over doubly stochastic B of CW(A, B), by Frank-Wolfe started at the
// Sinkhorn image of A.
BetheSolution maximize_bethe(const Matrix& a, std::size_t max_iter = 10'000,
                             double gap_tol = 1e-10);

struct KldSolution {
    Matrix maximizer;
    double objective = 0.0;
    std::size_t iterations = 0;
    double duality_gap_estimate = 0.0;
    bool converged = false;
};

// max over doubly stochastic B of sum b_ij ln(a_ij / b_ij), on the same
// Frank-Wolfe engine, started from the uniform matrix on a fully positive A
// (or from an average of support matchings otherwise), never from the
// Sinkhorn image.
KldSolution maximize_kld(const Matrix& a, std::size_t max_iter = 100'000,
                         double gap_tol = 1e-10);

// inf over sum x_i = 0 of ln prod_i sum_j a_ij e^{x_j}, by projected gradient
// descent with backtracking. Stops when the projected gradient's max norm is
// <= tol.
double product_relaxation(const Matrix& a, double tol = 1e-10, std::size_t max_iter = 200'000);

struct SchrijverBound {
    Matrix transformed;  // (b_ij (1 - b_ij))
    double log_bound;    // sum ln(1 - b_ij); -inf when some b_ij = 1
};

SchrijverBound schrijver_lower(const Matrix& b, double tol = kStochasticTol);

}  // namespace permbound
