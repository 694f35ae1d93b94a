#include <stdexcept>
#include <string>

#include "depocheck/resources.hpp"

namespace depocheck {

std::string_view resource(std::string_view name) {
  auto found = find_resource(name);
  if (!found) {
    throw std::logic_error("resource not embedded: " + std::string(name));
  }
  return *found;
}

}  // namespace depocheck
