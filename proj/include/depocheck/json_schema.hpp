#pragma once

#include <optional>
#include <string>

#include "json.hpp"

namespace depocheck {

/// Validates `value` against the subset of JSON Schema used by the shipped
/// response schemas: type (single or list), properties, required,
/// additionalProperties: false, items, enum, minimum, maximum, minItems and
/// minLength. Returns the first violation as "<json pointer>: <reason>".
std::optional<std::string> validate_json_schema(const nlohmann::json& schema,
                                                const nlohmann::json& value);

}  // namespace depocheck
