#include "permbound/frank_wolfe.hpp"

#include <algorithm>
#include <cmath>

#include "permbound/assignment.hpp"
#include "permbound/error.hpp"

namespace permbound {

namespace {

// Finite weights for the assignment oracle: boundary gradients are capped and
// forbidden entries are pushed far below anything reachable.
constexpr double kGradientCap = 1e4;
constexpr double kForbidden = -1e8;

double score(std::span<const double> weights, const std::vector<std::size_t>& sigma) {
    const std::size_t n = sigma.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += weights[i * n + sigma[i]];
    return s;
}

// Derivative of the objective at q + gamma (S - V) along S - V. NaN (opposing
// infinities) counts as overshoot.
double directional(const ConcaveObjective& f, std::span<const double> q,
                   const std::vector<std::size_t>& s, const std::vector<std::size_t>& v,
                   std::vector<double>& grad) {
    f.gradient(q, grad);
    const std::size_t n = s.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (s[i] == v[i]) continue;
        d += grad[i * n + s[i]] - grad[i * n + v[i]];
    }
    return std::isnan(d) ? -1.0 : d;
}

}  // namespace

std::vector<Atom> birkhoff_decomposition(std::span<const double> q, std::size_t n, double drop_tol) {
    if (q.size() != n * n) throw DimensionError("birkhoff_decomposition: size does not match n");
    std::vector<double> rest(q.begin(), q.end()), w(n * n);
    std::vector<Atom> atoms;
    double total = 0.0;
    while (atoms.size() < n * n && total < 1.0 - drop_tol) {
        // max sum of log entries favours matchings through large remainders
        for (std::size_t k = 0; k < n * n; ++k)
            w[k] = rest[k] > drop_tol ? std::log(rest[k]) : kForbidden;
        auto sigma = max_weight_assignment(w, n);
        double m = 1.0;
        for (std::size_t i = 0; i < n; ++i) m = std::min(m, rest[i * n + sigma[i]]);
        if (!(m > drop_tol)) break;
        for (std::size_t i = 0; i < n; ++i) rest[i * n + sigma[i]] -= m;
        atoms.push_back(Atom{std::move(sigma), m});
        total += m;
    }
    if (atoms.empty()) throw DomainError("birkhoff_decomposition: no perfect matching in the support");
    for (auto& a : atoms) a.weight /= total;
    return atoms;
}

FrankWolfeResult frank_wolfe(std::vector<Atom> atoms, std::size_t n,
                             std::span<const char> allowed, const ConcaveObjective& objective,
                             const FrankWolfeOptions& options) {
    if (atoms.empty() || allowed.size() != n * n)
        throw DimensionError("frank_wolfe: empty start or mask does not match n");

    FrankWolfeResult res;
    res.point.assign(n * n, 0.0);
    for (const auto& a : atoms) {
        if (a.sigma.size() != n) throw DimensionError("frank_wolfe: atom size does not match n");
        for (std::size_t i = 0; i < n; ++i) {
            if (!allowed[i * n + a.sigma[i]]) throw DomainError("frank_wolfe: atom leaves the allowed support");
            res.point[i * n + a.sigma[i]] += a.weight;
        }
    }
    res.objective = objective.value(res.point);
    res.trace.push_back(res.objective);

    std::vector<double> grad(n * n), weights(n * n), trial(n * n), probe_grad(n * n);
    for (res.iterations = 0; res.iterations < options.max_iter;) {
        objective.gradient(res.point, grad);
        for (std::size_t k = 0; k < n * n; ++k) {
            const double g = grad[k];
            weights[k] = allowed[k] ? std::clamp(std::isnan(g) ? 0.0 : g, -kGradientCap, kGradientCap)
                                    : kForbidden;
        }
        auto s = max_weight_assignment(weights, n);

        double current = 0.0;
        for (std::size_t k = 0; k < n * n; ++k)
            if (res.point[k] != 0.0) current += weights[k] * res.point[k];
        res.gap = score(weights, s) - current;
        if (res.gap <= options.gap_tol) {
            res.converged = true;
            break;
        }

        std::size_t away = 0;
        double worst = kGradientCap * static_cast<double>(n) * 10;
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            const double sc = score(weights, atoms[k].sigma);
            if (sc < worst) {
                worst = sc;
                away = k;
            }
        }
        const auto v = atoms[away].sigma;
        if (v == s) {
            // Only reachable through rounding when the gap is tiny.
            res.converged = res.gap <= std::max(options.gap_tol, 1e-12);
            break;
        }

        const double cap = atoms[away].weight;
        auto at = [&](double gamma) {
            trial = res.point;
            for (std::size_t i = 0; i < n; ++i) {
                trial[i * n + s[i]] += gamma;
                trial[i * n + v[i]] = std::max(trial[i * n + v[i]] - gamma, 0.0);
            }
            return std::span<const double>(trial);
        };
        double step = cap;
        if (directional(objective, at(cap), s, v, probe_grad) < 0.0) {
            double lo = 0.0, hi = cap;
            for (int it = 0; it < 200 && hi - lo > 1e-17 * std::max(cap, 1e-300); ++it) {
                const double mid = 0.5 * (lo + hi);
                if (directional(objective, at(mid), s, v, probe_grad) > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            step = 0.5 * (lo + hi);
        }
        const double value = objective.value(at(step));
        ++res.iterations;
        if (!(value >= res.objective)) break;  // no numerical progress left
        res.point = trial;
        res.objective = value;
        res.trace.push_back(value);

        if (step >= cap) {
            atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(away));
        } else {
            atoms[away].weight -= step;
        }
        auto hit = std::find_if(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.sigma == s; });
        if (hit != atoms.end())
            hit->weight += step;
        else
            atoms.push_back(Atom{std::move(s), step});
    }
    res.active_atoms = atoms.size();
    return res;
}

}  // namespace permbound
