#include "permbound/ensembles.hpp"

#include <cmath>
#include <sstream>

#include "permbound/dimer.hpp"
#include "permbound/error.hpp"
#include "permbound/scaling.hpp"

namespace permbound {

Matrix random_positive(std::size_t n, Rng& rng) {
    return Matrix::generate(n, n, [&](std::size_t, std::size_t) { return rng.uniform_positive(); });
}

Matrix random_doubly_stochastic(std::size_t n, Rng& rng) {
    return sinkhorn_scale(random_positive(n, rng), 1e-13, 1'000'000).scaled;
}

Matrix random_row_stochastic(std::size_t n, Rng& rng) {
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] = rng.uniform_positive();
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] /= s;
    }
    return Matrix(n, n, std::move(a));
}

Matrix random_nonnegative(std::size_t n, Rng& rng) {
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double magnitude = std::exp(4.0 * rng.uniform() - 2.0);
        for (std::size_t j = 0; j < n; ++j)
            a[i * n + j] = rng.uniform() < 0.2 ? 0.0 : magnitude * rng.uniform_positive();
    }
    // keep every row nonzero
    for (std::size_t i = 0; i < n; ++i) a[i * n + rng.below(n)] += rng.uniform_positive();
    return Matrix(n, n, std::move(a));
}

std::vector<double> random_stochastic_vector(std::size_t dim, Rng& rng, double skew) {
    std::vector<double> x(dim);
    double s = 0.0;
    for (auto& v : x) s += v = std::pow(rng.exponential(), skew);
    for (auto& v : x) v /= s;
    return x;
}

Matrix block_a1(std::size_t n) {
    if (n % 2 != 0) throw DomainError("block_a1: n must be even");
    return Matrix::generate(n, n, [](std::size_t i, std::size_t j) { return i / 2 == j / 2 ? 1.0 : 0.0; });
}

Matrix cycle_a2(std::size_t n) {
    return Matrix::generate(n, n, [n](std::size_t i, std::size_t j) {
        return (j == i || j == (i + 1) % n) ? 1.0 : 0.0;
    });
}

Matrix zero_one_density(std::size_t n, double q, Rng& rng) {
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("zero_one_density: q outside [0, 1]");
    return Matrix::generate(n, n, [&](std::size_t, std::size_t) { return rng.uniform() < q ? 1.0 : 0.0; });
}

Ensemble Ensemble::parse(const std::string& text, std::size_t k) {
    if (text == "ds-random") return Ensemble(Kind::ds_random, 0.0, k);
    if (text == "lambda-k") return Ensemble(Kind::lambda_k, 0.0, k);
    if (text == "block-a1") return Ensemble(Kind::block_a1, 0.0, k);
    if (text == "cycle-a2") return Ensemble(Kind::cycle_a2, 0.0, k);
    if (text == "positive-random") return Ensemble(Kind::positive_random, 0.0, k);
    if (text == "row-stochastic") return Ensemble(Kind::row_stochastic, 0.0, k);
    const std::string prefix = "zero-one-density";
    if (text.rfind(prefix, 0) == 0) {
        double q = 0.5;
        if (text.size() > prefix.size()) {
            if (text[prefix.size()] != '(' || text.back() != ')')
                throw DomainError("ensemble: expected zero-one-density(q)");
            std::istringstream ss(text.substr(prefix.size() + 1, text.size() - prefix.size() - 2));
            if (!(ss >> q) || !(q >= 0.0 && q <= 1.0))
                throw DomainError("ensemble: density q must lie in [0, 1]");
        }
        return Ensemble(Kind::zero_one_density, q, k);
    }
    throw DomainError("unknown ensemble '" + text + "'");
}

std::string Ensemble::name() const {
    switch (kind_) {
        case Kind::ds_random: return "ds-random";
        case Kind::lambda_k: return "lambda-k";
        case Kind::block_a1: return "block-a1";
        case Kind::cycle_a2: return "cycle-a2";
        case Kind::positive_random: return "positive-random";
        case Kind::row_stochastic: return "row-stochastic";
        case Kind::zero_one_density: {
            std::ostringstream ss;
            ss << "zero-one-density(" << q_ << ")";
            return ss.str();
        }
    }
    return "?";
}

Matrix Ensemble::make(std::size_t n, Rng& rng) const {
    switch (kind_) {
        case Kind::ds_random: return random_doubly_stochastic(n, rng);
        case Kind::lambda_k: return sample_lambda(k_, n, rng);
        case Kind::block_a1: return block_a1(n);
        case Kind::cycle_a2: return cycle_a2(n);
        case Kind::positive_random: return random_positive(n, rng);
        case Kind::row_stochastic: return random_row_stochastic(n, rng);
        case Kind::zero_one_density: return zero_one_density(n, q_, rng);
    }
    throw DomainError("unknown ensemble");
}

}  // namespace permbound
