#pragma once

#include <cstddef>
#include <span>

#include "permbound/matrix.hpp"
#include "permbound/psi.hpp"

namespace permbound {

// Margins below this count as failures of a grid certificate.
inline constexpr double kMarginTol = 1e-12;

// Grid certificate for the three hypotheses of the Orlicz upper bound:
//   1. x psi'(x) / psi(x) increasing on (0, 1)
//   2. x psi''(x) / psi'(x) increasing on (0, 1)
//   3. psi(e^{-r/e}) + psi(r e^{-r/e}) >= 1 for r in [0, 1]
// Margins are minima over the grid (forward differences for 1 and 2); the
// report says nothing about resolution below the grid step.
struct PsiConditionReport {
    double cond1_min_margin = 0.0;
    double cond2_min_margin = 0.0;
    double cond3_min_margin = 0.0;
    // Condition 3 over the full range r in [0, e].
    double cond3_extended_min_margin = 0.0;
    std::size_t grid_size = 0;

    bool passed(double tol = kMarginTol) const noexcept {
        return cond1_min_margin >= -tol && cond2_min_margin >= -tol && cond3_min_margin >= -tol &&
               cond3_extended_min_margin >= -tol;
    }
};

// ||v||_psi: the s > 0 with sum_i psi(|v_i| / s) = 1, by bisection on s over
// [max_i v_i, sum_i v_i]. For psi(x) = x^p this is the l_p norm.
double orlicz_norm(std::span<const double> v, const PsiFunction& f);

PsiConditionReport verify_psi_conditions(const PsiFunction& f, std::size_t grid = 100'000);

// sum_i ln ||b_i||_psi >= ln Per(B). f must pass a grid certificate; zero
// rows are a DomainError.
double upper_bound_orlicz(const Matrix& b, const PsiFunction& f);

// Smallest C in [e^{1/e}, 4] with
//   sum_j psi(x_j / (C prod_k (1 - x_k)^{1 - x_k})) <= 1
// for a stochastic vector x, by bisection to 1e-10. Returns e^{1/e} when the
// constraint already holds there.
double min_constant_C(std::span<const double> x, const PsiFunction& f = PsiFunction::canonical());

// n ln 2 + ln F(A) >= ln Per(A) for row-stochastic A.
double bethe_upper_bound(const Matrix& a, double tol = kStochasticTol);

struct BregmanBound {
    double log_bound = 0.0;  // sum_i ln(r_i!) / r_i; -inf when zero_permanent
    bool zero_permanent = false;
};

// prod_i (r_i!)^{1/r_i} for a 0/1 matrix with row sums r_i.
BregmanBound bregman_bound(const Matrix& a);

// ||(1, r)||_psi.
double g_star(double r, const PsiFunction& f = PsiFunction::canonical());

}  // namespace permbound
