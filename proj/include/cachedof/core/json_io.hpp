#pragma once

#include <json.hpp>

#include "cachedof/core/params.hpp"
#include "cachedof/core/rational.hpp"

namespace cachedof {

/// Rationals serialize as exact strings ("3/2").
nlohmann::json params_to_json(const SystemParams& params);
SystemParams params_from_json(const nlohmann::json& doc);

}  // namespace cachedof
