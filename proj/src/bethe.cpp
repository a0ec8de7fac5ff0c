#include "permbound/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "permbound/assignment.hpp"
#include "permbound/error.hpp"
#include "permbound/frank_wolfe.hpp"
#include "permbound/numeric.hpp"

namespace permbound {

namespace {

// Frank-Wolfe iterates drift from exact stochasticity by accumulated rounding;
// the CW inputs are validated at this looser level.
constexpr double kIterateTol = 1e-7;

double clamp_unit(double v, const char* what) {
    if (v > 1.0 + kStochasticTol)
        throw DomainError(std::string(what) + ": entry " + std::to_string(v) + " exceeds 1");
    return std::min(v, 1.0);
}

void require_doubly_stochastic(const Matrix& b, double tol, const char* what) {
    const auto r = classify(b, tol);
    if (!r.is_doubly_stochastic)
        throw DomainError(std::string(what) + ": matrix is not doubly stochastic (row dev " +
                          std::to_string(r.row_sum_deviation) + ", col dev " +
                          std::to_string(r.col_sum_deviation) + ")");
}

void require_same_shape(const Matrix& p, const Matrix& q, const char* what) {
    if (p.rows() != q.rows() || p.cols() != q.cols())
        throw DimensionError(std::string(what) + ": shapes differ");
}

double cw_value(std::span<const double> p, std::span<const double> q) {
    double s = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double qk = std::min(q[k], 1.0);
        if (qk > 0.0 && p[k] == 0.0) return -kInf;
        s += bethe_term(qk);
        if (qk > 0.0) s -= qk * std::log(qk / p[k]);
    }
    return s;
}

double kld_value(std::span<const double> p, std::span<const double> q) {
    double s = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k] <= 0.0) continue;
        if (p[k] == 0.0) return -kInf;
        s += q[k] * std::log(p[k] / q[k]);
    }
    return s;
}

std::vector<char> support_mask(const Matrix& a) {
    std::vector<char> mask(a.entries().size());
    for (std::size_t k = 0; k < mask.size(); ++k) mask[k] = a.entries()[k] > 0.0;
    return mask;
}

// Average of the distinct perfect matchings that cover each matchable support
// edge: a doubly stochastic point in the relative interior of the face the
// support spans.
std::vector<Atom> matching_average(const Matrix& a) {
    const std::size_t n = a.rows();
    if (!support_has_perfect_matching(a))
        throw ZeroPermanentError("support admits no perfect matching");
    std::set<std::vector<std::size_t>> matchings;
    std::vector<double> w(n * n);
    for (std::size_t e = 0; e < n * n; ++e) {
        if (a.entries()[e] == 0.0) continue;
        for (std::size_t k = 0; k < n * n; ++k)
            w[k] = a.entries()[k] > 0.0 ? (k == e ? 1.0 : 0.0) : -static_cast<double>(2 * n);
        auto sigma = max_weight_assignment(w, n);
        bool inside = true;
        for (std::size_t i = 0; i < n; ++i) inside = inside && a(i, sigma[i]) > 0.0;
        if (inside) matchings.insert(std::move(sigma));
    }
    std::vector<Atom> atoms;
    const double weight = 1.0 / static_cast<double>(matchings.size());
    for (const auto& sigma : matchings) atoms.push_back(Atom{sigma, weight});
    return atoms;
}

}  // namespace

double bethe_F(const Matrix& a) {
    double s = 0.0;
    for (double v : a.entries()) s += bethe_term(clamp_unit(v, "bethe_F"));
    return s;
}

double cw_functional(const Matrix& p, const Matrix& q) {
    require_same_shape(p, q, "cw_functional");
    require_doubly_stochastic(q, kIterateTol, "cw_functional");
    for (double v : q.entries()) clamp_unit(v, "cw_functional");
    return cw_value(p.entries(), q.entries());
}

std::vector<double> cw_gradient(const Matrix& p, const Matrix& q) {
    require_same_shape(p, q, "cw_gradient");
    std::vector<double> g(q.entries().size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double pk = p.entries()[k];
        const double qk = q.entries()[k];
        if (pk == 0.0) {
            g[k] = -kInf;
            continue;
        }
        if (!(qk > 0.0 && qk < 1.0))
            throw DomainError("cw_gradient: q on the boundary {0, 1} inside the support of P");
        g[k] = -2.0 - std::log1p(-qk) - std::log(qk) + std::log(pk);
    }
    return g;
}

double lower_bound_general(const Matrix& a, const Matrix& b, double tol) {
    require_same_shape(a, b, "lower_bound_general");
    require_doubly_stochastic(b, tol, "lower_bound_general");
    for (double v : b.entries()) clamp_unit(v, "lower_bound_general");
    return cw_value(a.entries(), b.entries());
}

BoundReport approximate_permanent(const Matrix& a, double tol, std::size_t max_iter) {
    require_square(a, "approximate_permanent");
    BoundReport report;
    report.n = a.rows();
    auto fill = [&](const ScalingResult& s) {
        const double e = bethe_F(s.scaled) - s.log_factor_product;
        report.log_lower = e;
        report.log_estimate = e;
        report.log_upper = e + static_cast<double>(report.n) * std::log(2.0);
        report.scaling_residual = s.residual;
    };
    try {
        fill(sinkhorn_scale(a, tol, max_iter));
    } catch (const ScalingNonConvergence& e) {
        fill(e.partial());
        report.degraded = true;
    }
    return report;
}

BetheSolution maximize_bethe(const Matrix& a, std::size_t max_iter, double gap_tol) {
    require_square(a, "maximize_bethe");
    const std::size_t n = a.rows();
    std::vector<Atom> start;
    try {
        const auto s = sinkhorn_scale(a, 1e-13, kSinkhornMaxIter);
        start = birkhoff_decomposition(s.scaled.entries(), n);
    } catch (const ScalingNonConvergence&) {
        start = matching_average(a);
    }

    const std::vector<double> p(a.entries().begin(), a.entries().end());
    ConcaveObjective f;
    f.value = [&p](std::span<const double> q) { return cw_value(p, q); };
    f.gradient = [&p](std::span<const double> q, std::span<double> g) {
        for (std::size_t k = 0; k < q.size(); ++k) {
            if (p[k] == 0.0) {
                g[k] = -kInf;
                continue;
            }
            const double qk = std::clamp(q[k], 0.0, 1.0);
            g[k] = -2.0 - std::log1p(-qk) - std::log(qk) + std::log(p[k]);
        }
    };
    auto mask = support_mask(a);
    FrankWolfeOptions opt;
    opt.max_iter = max_iter;
    opt.gap_tol = gap_tol;
    auto r = frank_wolfe(std::move(start), n, mask, f, opt);
    return BetheSolution{Matrix(n, n, std::move(r.point)), r.objective, r.iterations, r.gap,
                         r.converged, std::move(r.trace)};
}

KldSolution maximize_kld(const Matrix& a, std::size_t max_iter, double gap_tol) {
    require_square(a, "maximize_kld");
    const std::size_t n = a.rows();
    const bool positive = std::all_of(a.entries().begin(), a.entries().end(),
                                      [](double v) { return v > 0.0; });
    std::vector<Atom> start;
    if (positive) {
        // uniform matrix as the average of the n cyclic shifts
        for (std::size_t r = 0; r < n; ++r) {
            std::vector<std::size_t> sigma(n);
            for (std::size_t i = 0; i < n; ++i) sigma[i] = (i + r) % n;
            start.push_back(Atom{std::move(sigma), 1.0 / static_cast<double>(n)});
        }
    } else {
        start = matching_average(a);
    }

    const std::vector<double> p(a.entries().begin(), a.entries().end());
    ConcaveObjective f;
    f.value = [&p](std::span<const double> q) { return kld_value(p, q); };
    f.gradient = [&p](std::span<const double> q, std::span<double> g) {
        for (std::size_t k = 0; k < q.size(); ++k)
            g[k] = p[k] == 0.0 ? -kInf : std::log(p[k]) - std::log(std::max(q[k], 0.0)) - 1.0;
    };
    auto mask = support_mask(a);
    FrankWolfeOptions opt;
    opt.max_iter = max_iter;
    opt.gap_tol = gap_tol;
    auto r = frank_wolfe(std::move(start), n, mask, f, opt);
    return KldSolution{Matrix(n, n, std::move(r.point)), r.objective, r.iterations, r.gap,
                       r.converged};
}

double product_relaxation(const Matrix& a, double tol, std::size_t max_iter) {
    require_square(a, "product_relaxation");
    if (!support_has_perfect_matching(a))
        throw ZeroPermanentError("product_relaxation: support admits no perfect matching");
    const std::size_t n = a.rows();
    std::vector<double> log_a(n * n);
    for (std::size_t k = 0; k < n * n; ++k)
        log_a[k] = a.entries()[k] > 0.0 ? std::log(a.entries()[k]) : -kInf;

    // f(x) = sum_i ln sum_j a_ij e^{x_j}; grad_j = sum_i w_ij, w row-normalized.
    auto evaluate = [&](const std::vector<double>& x, std::vector<double>* grad) {
        double f = 0.0;
        if (grad) grad->assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double top = -kInf;
            for (std::size_t j = 0; j < n; ++j) top = std::max(top, log_a[i * n + j] + x[j]);
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += std::exp(log_a[i * n + j] + x[j] - top);
            f += top + std::log(s);
            if (grad)
                for (std::size_t j = 0; j < n; ++j)
                    (*grad)[j] += std::exp(log_a[i * n + j] + x[j] - top) / s;
        }
        return f;
    };

    // Projected gradient with Barzilai-Borwein step lengths and an Armijo
    // safeguard. Since sum_j grad_j = n, the projection onto sum x = 0 is
    // grad - 1.
    std::vector<double> x(n, 0.0), grad, trial(n), trial_grad;
    double f = evaluate(x, &grad);
    double step = 1.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        double norm_inf = 0.0, norm_sq = 0.0;
        for (double g : grad) {
            norm_inf = std::max(norm_inf, std::abs(g - 1.0));
            norm_sq += (g - 1.0) * (g - 1.0);
        }
        if (norm_inf <= tol) return f;
        double t = step;
        double ft = 0.0;
        while (true) {
            for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] - t * (grad[j] - 1.0);
            ft = evaluate(trial, &trial_grad);
            if (ft <= f - 1e-4 * t * norm_sq) break;
            // Near the optimum the decrease drowns in rounding; keep going
            // while the projected gradient still shrinks.
            if (std::abs(ft - f) <= 1e-13 * (1.0 + std::abs(f))) {
                double trial_inf = 0.0;
                for (double g : trial_grad) trial_inf = std::max(trial_inf, std::abs(g - 1.0));
                if (trial_inf < norm_inf) break;
            }
            t *= 0.5;
            if (t < 1e-300) return f;  // stalled at rounding level
        }
        // BB1 length from the accepted step: <s,s>/<s,y>
        double ss = 0.0, sy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double sj = trial[j] - x[j];
            ss += sj * sj;
            sy += sj * (trial_grad[j] - grad[j]);
        }
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e10) : std::min(2.0 * t, 1e10);
        x.swap(trial);
        grad.swap(trial_grad);
        f = ft;
    }
    throw NonConvergenceError("product_relaxation: no convergence after " +
                                  std::to_string(max_iter) + " iterations",
                              f);
}

SchrijverBound schrijver_lower(const Matrix& b, double tol) {
    require_doubly_stochastic(b, tol, "schrijver_lower");
    double log_bound = 0.0;
    for (double v : b.entries()) log_bound += std::log1p(-clamp_unit(v, "schrijver_lower"));
    Matrix transformed = b.map([](double v) {
        const double u = std::min(v, 1.0);
        return u * (1.0 - u);
    });
    return SchrijverBound{std::move(transformed), log_bound};
}

}  // namespace permbound
