#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace permbound {

// Root of (1 - ln a) / a = 1/e on [1, e], by bisection; a ~ 1.54.
double solve_root_a();

// Convex increasing bijections psi of [0, 1] used to define Orlicz norms.
//   psi_a:        psi(x) = 1 - (1 - x) a^x,             1 < a < e
//   power:        psi(x) = x^p,                          p >= 1
//   phi0_inverse: psi = phi0^{-1}, phi0(x) = Gamma(1 + 1/x)^{-x}
class PsiFunction {
public:
    enum class Kind { psi_a, power, phi0_inverse };

    static PsiFunction psi_a(double a);
    // psi_a at the canonical root of solve_root_a().
    static PsiFunction canonical();
    static PsiFunction power(double p);
    static PsiFunction phi0_inverse();

    Kind kind() const noexcept { return kind_; }
    // a for psi_a, p for power, 0 for phi0_inverse.
    double parameter() const noexcept { return param_; }
    // True for psi_a with 1/e <= (1 - ln a)/a < 1, the range the
    // upper-bound argument covers.
    bool in_certified_family() const noexcept;

    // order-th derivative at x in [0, 1], order 0..3.
    double eval(double x, int order = 0) const;
    // phi = psi^{-1} on [0, 1].
    double inverse(double y) const;

private:
    PsiFunction(Kind kind, double param);
    double raw(double x, int order) const;

    Kind kind_;
    double param_;
    // psi on a uniform grid, used to bracket the inverse.
    std::vector<double> table_;
};

// psi_eval as a free function: f's order-th derivative at x.
double psi_eval(const PsiFunction& f, double x, int order = 0);

// phi0(x) = Gamma((1 + x)/x)^{-x} for x in (0, 1]; phi0(1/r) = (1/r!)^{1/r}.
double phi0_eval(double x);

// phi0 and its first three derivatives at x in (0, 1].
std::array<double, 4> phi0_derivatives(double x);

}  // namespace permbound
