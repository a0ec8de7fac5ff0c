#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace permbound {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// x ln x with 0 ln 0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// x ln y with 0 ln y = 0 for any y, including y = 0.
inline double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

// (1 - x) ln(1 - x), the per-entry Bethe term; 0 at x = 1.
inline double bethe_term(double x) { return xlogx(1.0 - x); }

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ln of the arithmetic mean of exp(values), shifted by the maximum so the
// linear-domain sum cannot overflow. Returns -inf when every value is -inf.
inline double log_mean_exp(std::span<const double> values) {
    double top = -kInf;
    for (double v : values) top = std::max(top, v);
    if (!std::isfinite(top)) return top;
    CompensatedSum s;
    for (double v : values) s.add(std::exp(v - top));
    return top + std::log(s.value() / static_cast<double>(values.size()));
}

}  // namespace permbound
