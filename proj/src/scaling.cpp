#include "permbound/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "permbound/exact.hpp"
#include "permbound/numeric.hpp"

namespace permbound {

ScalingNonConvergence::ScalingNonConvergence(ScalingResult partial)
    : NonConvergenceError("sinkhorn_scale: no convergence after " +
                              std::to_string(partial.iterations) + " iterations (residual " +
                              std::to_string(partial.residual) + ")",
                          partial.residual),
      partial_(std::move(partial)) {}

namespace {

double residual_of(const std::vector<double>& b, std::size_t n) {
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0, c = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            r += b[i * n + j];
            c += b[j * n + i];
        }
        dev = std::max({dev, std::abs(r - 1.0), std::abs(c - 1.0)});
    }
    return dev;
}

ScalingResult assemble(const Matrix& a, const std::vector<double>& log_x,
                       const std::vector<double>& log_y, std::size_t iterations) {
    const std::size_t n = a.rows();
    std::vector<double> x(n), y(n), b(n * n);
    double lfp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::exp(log_x[i]);
        y[i] = std::exp(log_y[i]);
        lfp += log_x[i] + log_y[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b[i * n + j] = a(i, j) == 0.0 ? 0.0 : a(i, j) * std::exp(log_x[i] + log_y[j]);
    const double residual = residual_of(b, n);
    return ScalingResult{std::move(x), std::move(y), Matrix(n, n, std::move(b)), residual,
                         iterations, lfp};
}

}  // namespace

ScalingResult sinkhorn_scale(const Matrix& a, double tol, std::size_t max_iter) {
    require_square(a, "sinkhorn_scale");
    if (!(tol > 0.0)) throw DomainError("sinkhorn_scale: tol must be positive");
    if (max_iter < 1) throw DomainError("sinkhorn_scale: max_iter must be >= 1");
    if (!support_has_perfect_matching(a))
        throw ZeroPermanentError("sinkhorn_scale: support admits no perfect matching");

    const std::size_t n = a.rows();
    std::vector<double> b(a.entries().begin(), a.entries().end());
    std::vector<double> log_x(n, 0.0), log_y(n, 0.0);
    std::size_t iter = 0;
    while (true) {
        while (residual_of(b, n) > tol) {
            if (iter == max_iter) throw ScalingNonConvergence(assemble(a, log_x, log_y, iter));
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += b[i * n + j];
                for (std::size_t j = 0; j < n; ++j) b[i * n + j] /= s;
                log_x[i] -= std::log(s);
            }
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += b[i * n + j];
                for (std::size_t i = 0; i < n; ++i) b[i * n + j] /= s;
                log_y[j] -= std::log(s);
            }
            ++iter;
        }
        // The reported matrix is rebuilt from the factors, which can move the
        // residual by a few ulps; keep iterating on the rebuilt entries then.
        ScalingResult r = assemble(a, log_x, log_y, iter);
        if (r.residual <= tol) return r;
        if (iter == max_iter) throw ScalingNonConvergence(std::move(r));
        b.assign(r.scaled.entries().begin(), r.scaled.entries().end());
    }
}

double scaling_relation_check(const Matrix& a, const ScalingResult& r) {
    const PermanentValue per_a = permanent_ryser(a);
    const PermanentValue per_b = permanent_ryser(r.scaled);
    if (per_a.is_zero() || per_b.is_zero())
        return per_a.is_zero() == per_b.is_zero() ? 0.0 : kInf;
    return std::abs(per_a.log_value() - (per_b.log_value() - r.log_factor_product));
}

}  // namespace permbound
