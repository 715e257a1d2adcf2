#include "btl/residuals/params.hpp"

#include <array>
#include <cmath>

#include "btl/error.hpp"

namespace btl::res {

EquationParams::EquationParams(std::initializer_list<Coefficient> coefficients) {
  for (const Coefficient& c : coefficients) add(c);
}

bool EquationParams::is_known_name(std::string_view name) {
  static constexpr std::array<std::string_view, 7> kNames{"a", "b", "c", "d",
                                                          "h", "f", "beta"};
  for (auto n : kNames) {
    if (n == name) return true;
  }
  return false;
}

void EquationParams::add(Coefficient c) {
  if (!is_known_name(c.name)) throw ConfigError("unknown coefficient name '" + c.name + "'");
  if (contains(c.name)) throw ConfigError("duplicate coefficient '" + c.name + "'");
  if (!std::isfinite(c.value)) throw ConfigError("coefficient '" + c.name + "' is not finite");
  coefficients_.push_back(std::move(c));
}

bool EquationParams::contains(std::string_view name) const {
  for (const auto& c : coefficients_) {
    if (c.name == name) return true;
  }
  return false;
}

const Coefficient& EquationParams::get(std::string_view name) const {
  for (const auto& c : coefficients_) {
    if (c.name == name) return c;
  }
  throw Error("coefficient '" + std::string(name) + "' is not defined");
}

void EquationParams::set_value(std::string_view name, double value) {
  for (auto& c : coefficients_) {
    if (c.name != name) continue;
    if (!c.free) throw Error("coefficient '" + c.name + "' is fixed");
    c.value = value;
    return;
  }
  throw Error("coefficient '" + std::string(name) + "' is not defined");
}

std::vector<std::string> EquationParams::free_names() const {
  std::vector<std::string> out;
  for (const auto& c : coefficients_) {
    if (c.free) out.push_back(c.name);
  }
  return out;
}

}  // namespace btl::res
