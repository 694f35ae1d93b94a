#include "depocheck/json_schema.hpp"

namespace depocheck {

namespace {

using nlohmann::json;

bool has_type(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

std::optional<std::string> check(const json& schema, const json& value, const std::string& path) {
  auto fail = [&](const std::string& why) {
    return std::optional<std::string>((path.empty() ? "/" : path) + ": " + why);
  };

  if (auto it = schema.find("type"); it != schema.end()) {
    bool ok = false;
    if (it->is_array()) {
      for (const auto& t : *it) ok = ok || has_type(value, t.get<std::string>());
    } else {
      ok = has_type(value, it->get<std::string>());
    }
    if (!ok) return fail("expected type " + it->dump());
  }

  if (auto it = schema.find("enum"); it != schema.end()) {
    bool found = false;
    for (const auto& option : *it) found = found || option == value;
    if (!found) return fail("value " + value.dump() + " not in " + it->dump());
  }

  if (value.is_number()) {
    if (auto it = schema.find("minimum"); it != schema.end() && value.get<double>() < it->get<double>()) {
      return fail("below minimum " + it->dump());
    }
    if (auto it = schema.find("maximum"); it != schema.end() && value.get<double>() > it->get<double>()) {
      return fail("above maximum " + it->dump());
    }
  }

  if (value.is_string()) {
    if (auto it = schema.find("minLength");
        it != schema.end() && value.get_ref<const std::string&>().size() < it->get<std::size_t>()) {
      return fail("shorter than " + it->dump());
    }
  }

  if (value.is_array()) {
    if (auto it = schema.find("minItems"); it != schema.end() && value.size() < it->get<std::size_t>()) {
      return fail("fewer than " + it->dump() + " items");
    }
    if (auto it = schema.find("items"); it != schema.end()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (auto err = check(*it, value[i], path + "/" + std::to_string(i))) return err;
      }
    }
  }

  if (value.is_object()) {
    const json* properties = nullptr;
    if (auto it = schema.find("properties"); it != schema.end()) properties = &*it;
    if (auto it = schema.find("required"); it != schema.end()) {
      for (const auto& key : *it) {
        if (!value.contains(key.get<std::string>())) {
          return fail("missing required property " + key.dump());
        }
      }
    }
    const bool closed = schema.value("additionalProperties", true) == false;
    for (const auto& [key, child] : value.items()) {
      if (properties != nullptr && properties->contains(key)) {
        if (auto err = check((*properties)[key], child, path + "/" + key)) return err;
      } else if (closed) {
        return fail("unexpected property \"" + key + "\"");
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_json_schema(const nlohmann::json& schema,
                                                const nlohmann::json& value) {
  return check(schema, value, "");
}

}  // namespace depocheck
