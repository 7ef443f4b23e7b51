#pragma once

#include "idealtally/field.hpp"

#include <optional>
#include <string>
#include <vector>

namespace idealtally {
namespace catalog {

/// Q(i): x^2 + 1.
FieldConfig gaussian();

/// Q(sqrt 2): x^2 - 2.
FieldConfig sqrt2();

/// Q(sqrt 5): x^2 - x - 1 (theta the golden ratio).
FieldConfig sqrt5();

/// Q(zeta_11): the 11th cyclotomic field, invariants as tabulated on LMFDB.
FieldConfig zeta11();

/// Lee's Lambda_K(10) for Q(zeta_11), carried as external data.
inline constexpr double kZeta11LeeLambda = 9.65555e26;

/// Lookup by name ("qi"/"gaussian", "sqrt2", "sqrt5", "zeta11").
std::optional<FieldConfig> by_name(const std::string& name);

std::vector<std::string> names();

}  // namespace catalog
}  // namespace idealtally
