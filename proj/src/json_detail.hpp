#pragma once

#include <json.hpp>

#include "ordinal/pattern.hpp"

namespace ordinal::detail {

nlohmann::ordered_json weights_object(int n, std::span<const double> weights);
std::vector<double> weights_from_object(int n, const nlohmann::json& object);

}  // namespace ordinal::detail
