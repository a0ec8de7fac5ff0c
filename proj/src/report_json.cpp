#include "permbound/report_json.hpp"

#include <cmath>

namespace permbound {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

}  // namespace

nlohmann::json matrix_to_json(const Matrix& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < a.rows(); ++i)
        rows.push_back(std::vector<double>(a.row(i).begin(), a.row(i).end()));
    return rows;
}

nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["log_lower"] = r.log_lower;
    j["log_estimate"] = r.log_estimate;
    j["log_upper"] = r.log_upper;
    j["log_exact"] = r.log_exact ? nlohmann::json(*r.log_exact) : nlohmann::json(nullptr);
    j["scaling_residual"] = r.scaling_residual;
    j["degraded"] = r.degraded;
    j["log2_lower"] = r.log_lower / kLog2;
    j["log2_upper"] = r.log_upper / kLog2;
    return j;
}

nlohmann::json to_json(const BetheSolution& s) {
    return {{"maximizer", matrix_to_json(s.maximizer)},
            {"objective", s.objective},
            {"iterations", s.iterations},
            {"duality_gap_estimate", s.duality_gap_estimate},
            {"converged", s.converged}};
}

nlohmann::json to_json(const ScalingResult& s) {
    return {{"row_factors", s.row_factors},
            {"col_factors", s.col_factors},
            {"scaled", matrix_to_json(s.scaled)},
            {"residual", s.residual},
            {"iterations", s.iterations},
            {"log_factor_product", s.log_factor_product}};
}

nlohmann::json to_json(const PsiConditionReport& r) {
    return {{"cond1_min_margin", r.cond1_min_margin},
            {"cond2_min_margin", r.cond2_min_margin},
            {"cond3_min_margin", r.cond3_min_margin},
            {"cond3_extended_min_margin", r.cond3_extended_min_margin},
            {"grid_size", r.grid_size}};
}

nlohmann::json to_json(const ConjectureScan& s) {
    nlohmann::json dump = nlohmann::json::array();
    for (const auto& m : s.counterexamples) dump.push_back(matrix_to_json(m));
    return {{"conjecture", s.conjecture},
            {"instances", s.instances},
            {"min_log_ratio", s.min_log_ratio},
            {"max_log_ratio", s.max_log_ratio},
            {"max_ratio", std::exp(s.max_log_ratio)},
            {"argmax", s.argmax},
            {"counterexample_count", s.counterexample_count},
            {"counterexamples", dump}};
}

nlohmann::json to_json(const DimerBoundReport& r) {
    return {{"log_per_m", r.log_per_m},
            {"log_lower_pa1", r.log_lower_pa1},
            {"p", r.p},
            {"limit_beta", r.limit_beta}};
}

}  // namespace permbound
