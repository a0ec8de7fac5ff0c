#include "permbound/psi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/polygamma.hpp>

#include "permbound/error.hpp"
#include "permbound/numeric.hpp"

namespace permbound {

namespace {

constexpr std::size_t kTableSize = 1024;

double bisect_increasing(double lo, double hi, double target, auto&& f) {
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double solve_root_a() {
    // h(a) = (1 - ln a)/a - 1/e is strictly decreasing on [1, e]:
    // h'(a) = (ln a - 2)/a^2 < 0. h(1) = 1 - 1/e > 0, h(e) = -1/e < 0.
    auto h = [](double a) { return (1.0 - std::log(a)) / a - 1.0 / std::numbers::e; };
    double lo = 1.0, hi = std::numbers::e;
    while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (h(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::array<double, 4> phi0_derivatives(double x) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("phi0: x must lie in (0, 1]");
    // phi0 = e^u, u(x) = -x lnGamma(t), t = 1 + 1/x.
    //   u'   = -lnGamma(t) + digamma(t)/x
    //   u''  = -trigamma(t)/x^3
    //   u''' = 3 trigamma(t)/x^4 + tetragamma(t)/x^5
    const double t = 1.0 + 1.0 / x;
    const double u = -x * std::lgamma(t);
    const double psi0 = boost::math::digamma(t);
    const double psi1 = boost::math::trigamma(t);
    const double psi2 = boost::math::polygamma(2, t);
    const double u1 = -std::lgamma(t) + psi0 / x;
    const double u2 = -psi1 / (x * x * x);
    const double u3 = 3.0 * psi1 / (x * x * x * x) + psi2 / (x * x * x * x * x);
    const double e = std::exp(u);
    return {e, u1 * e, (u2 + u1 * u1) * e, (u3 + 3.0 * u1 * u2 + u1 * u1 * u1) * e};
}

double phi0_eval(double x) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("phi0: x must lie in (0, 1]");
    return std::exp(-x * std::lgamma(1.0 + 1.0 / x));
}

PsiFunction::PsiFunction(Kind kind, double param) : kind_(kind), param_(param) {
    table_.resize(kTableSize + 1);
    for (std::size_t k = 0; k <= kTableSize; ++k)
        table_[k] = raw(static_cast<double>(k) / kTableSize, 0);
    table_.front() = 0.0;
    table_.back() = 1.0;
}

PsiFunction PsiFunction::psi_a(double a) {
    if (!(a > 1.0 && a < std::numbers::e))
        throw DomainError("psi_a: a must lie in (1, e), got " + std::to_string(a));
    return PsiFunction(Kind::psi_a, a);
}

PsiFunction PsiFunction::canonical() {
    static const PsiFunction f = psi_a(solve_root_a());
    return f;
}

PsiFunction PsiFunction::power(double p) {
    if (!(p >= 1.0 && std::isfinite(p))) throw DomainError("power psi: p must be >= 1");
    return PsiFunction(Kind::power, p);
}

PsiFunction PsiFunction::phi0_inverse() { return PsiFunction(Kind::phi0_inverse, 0.0); }

bool PsiFunction::in_certified_family() const noexcept {
    if (kind_ != Kind::psi_a) return false;
    const double r = (1.0 - std::log(param_)) / param_;
    return r >= 1.0 / std::numbers::e - 1e-15 && r < 1.0;
}

double PsiFunction::raw(double x, int order) const {
    switch (kind_) {
        case Kind::psi_a: {
            const double b = std::log(param_);
            const double ax = std::exp(b * x);
            switch (order) {
                // 1 - (1-x) e^{bx} written without the cancellation near 0.
                case 0: return x * ax - std::expm1(b * x);
                case 1: return (1.0 - (1.0 - x) * b) * ax;
                case 2: return b * (2.0 - (1.0 - x) * b) * ax;
                default: return b * b * (3.0 - (1.0 - x) * b) * ax;
            }
        }
        case Kind::power: {
            const double p = param_;
            double coef = 1.0;
            for (int k = 0; k < order; ++k) coef *= p - k;
            if (coef == 0.0) return 0.0;
            return coef * std::pow(x, p - order);
        }
        case Kind::phi0_inverse: {
            // y = psi(x) solves phi0(y) = x; inverse-function derivatives from
            // phi0's own.
            if (x == 0.0) {
                // phi0(y) ~ e y near 0, with phi0'' -> -inf.
                return order == 0 ? 0.0 : (order == 1 ? 1.0 / std::numbers::e : kInf);
            }
            const double y = x >= 1.0 ? 1.0 : bisect_increasing(0.0, 1.0, x, [](double t) {
                return t <= 0.0 ? 0.0 : phi0_eval(t);
            });
            if (order == 0) return y;
            const auto d = phi0_derivatives(y);
            const double p1 = 1.0 / d[1];
            if (order == 1) return p1;
            if (order == 2) return -d[2] * p1 * p1 * p1;
            return (3.0 * d[2] * d[2] - d[1] * d[3]) * std::pow(p1, 5);
        }
    }
    return 0.0;
}

double PsiFunction::eval(double x, int order) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("psi: argument " + std::to_string(x) + " outside [0, 1]");
    if (order < 0 || order > 3) throw DomainError("psi: derivative order must be 0..3");
    if (order == 0 && x == 1.0) return 1.0;
    return raw(x, order);
}

double PsiFunction::inverse(double y) const {
    if (!(y >= 0.0 && y <= 1.0))
        throw DomainError("psi inverse: argument " + std::to_string(y) + " outside [0, 1]");
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 1.0;
    switch (kind_) {
        case Kind::power: return std::pow(y, 1.0 / param_);
        case Kind::phi0_inverse: return phi0_eval(y);
        case Kind::psi_a: break;
    }
    const auto it = std::lower_bound(table_.begin(), table_.end(), y);
    const auto k = static_cast<std::size_t>(it - table_.begin());
    const double hi = static_cast<double>(k) / kTableSize;
    const double lo = k == 0 ? 0.0 : static_cast<double>(k - 1) / kTableSize;
    return bisect_increasing(lo, hi, y, [this](double t) { return raw(t, 0); });
}

double psi_eval(const PsiFunction& f, double x, int order) { return f.eval(x, order); }

}  // namespace permbound
