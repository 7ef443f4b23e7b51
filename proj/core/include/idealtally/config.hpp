#pragma once

#include "idealtally/field.hpp"

#include <filesystem>
#include <string>

namespace idealtally {

/// Parses a field config from its JSON text. Keys: min_poly (integer array,
/// ascending degree), optional disc, regulator, class_number, roots_of_unity,
/// fundamental_units (array of integer arrays), prime_overrides (map from
/// prime to [[f, e], ...]).
FieldConfig parse_field_config(const std::string& json_text);

FieldConfig load_field_config(const std::filesystem::path& path);

/// Canonical JSON form (stable key order and integer formatting).
std::string field_config_to_json(const FieldConfig& cfg);

}  // namespace idealtally
