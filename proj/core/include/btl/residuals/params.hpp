#pragma once

#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace btl::res {

/// One named equation or transform coefficient.
struct Coefficient {
  std::string name;
  double value = 0.0;
  bool free = false;
  std::optional<double> exact;
};

/// Named coefficients drawn from {a, b, c, d, h, f, beta}. Fixed entries are
/// immutable once added.
class EquationParams {
 public:
  EquationParams() = default;
  EquationParams(std::initializer_list<Coefficient> coefficients);

  void add(Coefficient c);
  bool contains(std::string_view name) const;
  const Coefficient& get(std::string_view name) const;
  double value(std::string_view name) const { return get(name).value; }

  /// Throws if `name` is fixed.
  void set_value(std::string_view name, double value);

  std::span<const Coefficient> all() const { return coefficients_; }
  std::vector<std::string> free_names() const;

  static bool is_known_name(std::string_view name);

 private:
  std::vector<Coefficient> coefficients_;
};

}  // namespace btl::res
