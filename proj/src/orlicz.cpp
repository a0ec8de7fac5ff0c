#include "permbound/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "permbound/error.hpp"
#include "permbound/numeric.hpp"

namespace permbound {

namespace {

double psi_sum(std::span<const double> v, double s, const PsiFunction& f) {
    double total = 0.0;
    for (double x : v) total += f.eval(std::min(x / s, 1.0));
    return total;
}

double row_bethe_factor(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += bethe_term(std::min(v, 1.0));
    return std::exp(s);
}

}  // namespace

double orlicz_norm(std::span<const double> v, const PsiFunction& f) {
    double hi = 0.0, lo = 0.0;
    for (double x : v) {
        if (!(x >= 0.0) || !std::isfinite(x))
            throw DomainError("orlicz_norm: entries must be finite and nonnegative");
        hi += x;
        lo = std::max(lo, x);
    }
    if (lo == 0.0) throw DomainError("orlicz_norm: zero vector");
    // psi(t) <= t on [0,1] (convex, psi(0)=0, psi(1)=1) gives the sum <= 1 at s = sum v,
    // and psi(1) = 1 gives >= 1 at s = max v.
    hi = std::max(hi, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (psi_sum(v, mid, f) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

PsiConditionReport verify_psi_conditions(const PsiFunction& f, std::size_t grid) {
    if (grid < 100) throw DomainError("verify_psi_conditions: grid must be >= 100");
    PsiConditionReport rep;
    rep.grid_size = grid;

    const double step = 1.0 / static_cast<double>(grid + 1);
    double prev1 = 0.0, prev2 = 0.0;
    rep.cond1_min_margin = kInf;
    rep.cond2_min_margin = kInf;
    for (std::size_t k = 1; k <= grid; ++k) {
        const double x = static_cast<double>(k) * step;
        const double d1 = f.eval(x, 1);
        const double r1 = x * d1 / f.eval(x, 0);
        const double r2 = x * f.eval(x, 2) / d1;
        if (k > 1) {
            rep.cond1_min_margin = std::min(rep.cond1_min_margin, r1 - prev1);
            rep.cond2_min_margin = std::min(rep.cond2_min_margin, r2 - prev2);
        }
        prev1 = r1;
        prev2 = r2;
    }

    auto cond3 = [&](double r) {
        const double y = std::exp(-r / std::numbers::e);
        return f.eval(std::min(y, 1.0)) + f.eval(std::min(r * y, 1.0)) - 1.0;
    };
    rep.cond3_min_margin = kInf;
    rep.cond3_extended_min_margin = kInf;
    for (std::size_t k = 0; k <= grid; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(grid);
        rep.cond3_min_margin = std::min(rep.cond3_min_margin, cond3(t));
        rep.cond3_extended_min_margin =
            std::min(rep.cond3_extended_min_margin, cond3(t * std::numbers::e));
    }
    return rep;
}

double upper_bound_orlicz(const Matrix& b, const PsiFunction& f) {
    require_square(b, "upper_bound_orlicz");
    if (!verify_psi_conditions(f, 1000).passed())
        throw DomainError("upper_bound_orlicz: psi fails the grid certificate");
    double total = 0.0;
    for (std::size_t i = 0; i < b.rows(); ++i) total += std::log(orlicz_norm(b.row(i), f));
    return total;
}

double min_constant_C(std::span<const double> x, const PsiFunction& f) {
    double sum = 0.0;
    for (double v : x) {
        if (!(v >= 0.0)) throw DomainError("min_constant_C: entries must be nonnegative");
        sum += v;
    }
    if (x.empty() || std::abs(sum - 1.0) > kStochasticTol)
        throw DomainError("min_constant_C: x must be a stochastic vector");

    const double row_f = row_bethe_factor(x);
    auto total = [&](double c) {
        double t = 0.0;
        for (double v : x) {
            const double arg = v / (c * row_f);
            if (arg > 1.0 + 1e-12) throw DomainError("min_constant_C: psi argument above 1");
            t += f.eval(std::min(arg, 1.0));
        }
        return t;
    };
    double lo = std::exp(1.0 / std::numbers::e), hi = 4.0;
    if (total(lo) <= 1.0) return lo;
    if (total(hi) > 1.0) return hi;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (total(mid) <= 1.0 ? hi : lo) = mid;
    }
    return hi;
}

double bethe_upper_bound(const Matrix& a, double tol) {
    require_square(a, "bethe_upper_bound");
    if (!classify(a, tol, false).is_row_stochastic)
        throw DomainError("bethe_upper_bound: matrix is not row stochastic");
    double s = 0.0;
    for (double v : a.entries()) s += bethe_term(std::min(v, 1.0));
    return static_cast<double>(a.rows()) * std::log(2.0) + s;
}

BregmanBound bregman_bound(const Matrix& a) {
    require_square(a, "bregman_bound");
    if (!a.is_zero_one()) throw DomainError("bregman_bound: entries must be 0 or 1");
    BregmanBound out;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double r = 0.0;
        for (double v : a.row(i)) r += v;
        if (r == 0.0) return BregmanBound{-kInf, true};
        out.log_bound += std::lgamma(r + 1.0) / r;
    }
    return out;
}

double g_star(double r, const PsiFunction& f) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("g_star: r must be >= 0");
    const double v[2] = {1.0, r};
    return orlicz_norm(v, f);
}

}  // namespace permbound
