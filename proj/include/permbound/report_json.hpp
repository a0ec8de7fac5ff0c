#pragma once

#include <json.hpp>

#include "permbound/bethe.hpp"
#include "permbound/dimer.hpp"
#include "permbound/orlicz.hpp"
#include "permbound/scaling.hpp"
#include "permbound/scans.hpp"

namespace permbound {

// Field names follow the struct members. Log values are natural logs;
// non-finite values serialize as null.
nlohmann::json matrix_to_json(const Matrix& a);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const BetheSolution& s);
nlohmann::json to_json(const ScalingResult& s);
nlohmann::json to_json(const PsiConditionReport& r);
nlohmann::json to_json(const ConjectureScan& s);
nlohmann::json to_json(const DimerBoundReport& r);

}  // namespace permbound
