#pragma once

#include <optional>
#include <string_view>

namespace depocheck {

// Data files compiled into the binary (stopword list, prompt templates,
// response schemas). Names are paths relative to data/.
std::optional<std::string_view> find_resource(std::string_view name);

// Throws std::logic_error when the resource was not embedded.
std::string_view resource(std::string_view name);

}  // namespace depocheck
