#include "permbound/scans.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "permbound/bethe.hpp"
#include "permbound/exact.hpp"
#include "permbound/numeric.hpp"
#include "permbound/psi.hpp"

namespace permbound {

namespace {

constexpr std::size_t kKeptCounterexamples = 8;

ConjectureScan run_scan(std::string name, std::span<const Matrix> instances,
                        const std::function<double(const Matrix&)>& log_ratio) {
    ConjectureScan scan;
    scan.conjecture = std::move(name);
    scan.instances = instances.size();
    scan.min_log_ratio = kInf;
    scan.max_log_ratio = -kInf;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const double r = log_ratio(instances[i]);
        scan.min_log_ratio = std::min(scan.min_log_ratio, r);
        if (r > scan.max_log_ratio) {
            scan.max_log_ratio = r;
            scan.argmax = i;
        }
        if (r > kCounterexampleTol) {
            ++scan.counterexample_count;
            if (scan.counterexamples.size() < kKeptCounterexamples)
                scan.counterexamples.push_back(instances[i]);
        }
    }
    return scan;
}

}  // namespace

ConjectureScan scan_half_exponent_conjecture(std::span<const Matrix> doubly_stochastic) {
    return run_scan("per_le_2^(n/2)_F", doubly_stochastic, [](const Matrix& a) {
        return permanent_ryser(a).log_value() - bethe_F(a) -
               0.5 * static_cast<double>(a.rows()) * std::log(2.0);
    });
}

ConjectureScan scan_phi0_conjecture(std::span<const Matrix> row_stochastic) {
    return run_scan("per_phi0_le_1", row_stochastic, [](const Matrix& a) {
        const Matrix b = a.map([](double v) { return v > 0.0 ? phi0_eval(std::min(v, 1.0)) : 0.0; });
        return permanent_ryser(b).log_value();
    });
}

}  // namespace permbound
