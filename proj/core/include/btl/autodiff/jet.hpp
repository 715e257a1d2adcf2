#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>

namespace btl::ad {

/// Order of a partial derivative in (x, t).
struct MultiIndex {
  int dx = 0;
  int dt = 0;

  friend constexpr bool operator==(MultiIndex, MultiIndex) = default;
};

inline constexpr std::size_t kJetSize = 6;

/// Storage order of jet components. Every node of a graph carries all six.
inline constexpr std::array<MultiIndex, kJetSize> kSupportedIndices{{
    {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {3, 0}}};

namespace slot {
inline constexpr std::size_t v = 0;
inline constexpr std::size_t x = 1;
inline constexpr std::size_t t = 2;
inline constexpr std::size_t xx = 3;
inline constexpr std::size_t xt = 4;
inline constexpr std::size_t xxx = 5;
}  // namespace slot

/// Position of `index` in jet storage, or nullopt when unsupported.
constexpr std::optional<std::size_t> slot_of(MultiIndex index) {
  for (std::size_t i = 0; i < kJetSize; ++i) {
    if (kSupportedIndices[i] == index) return i;
  }
  return std::nullopt;
}

/// Like slot_of, but throws UnsupportedIndexError.
std::size_t require_slot(MultiIndex index);

std::string to_string(MultiIndex index);

using JetArray = std::array<double, kJetSize>;

/// A field's value and partial derivatives at one point, restricted to the
/// multi-indices that were requested.
class Jet {
 public:
  Jet() { present_ = 1u; }
  Jet(const JetArray& values, std::span<const MultiIndex> orders);
  static Jet full(const JetArray& values);

  bool has(MultiIndex index) const;
  double at(MultiIndex index) const;
  void set(MultiIndex index, double value);

  double value() const { return values_[0]; }
  const JetArray& raw() const { return values_; }

 private:
  JetArray values_{};
  std::uint8_t present_ = 0;
};

struct ComplexJet {
  Jet re;
  Jet im;
};

}  // namespace btl::ad
