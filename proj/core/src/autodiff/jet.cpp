#include "btl/autodiff/jet.hpp"

#include "btl/error.hpp"

namespace btl::ad {

std::size_t require_slot(MultiIndex index) {
  if (auto s = slot_of(index)) return *s;
  throw UnsupportedIndexError("unsupported derivative multi-index " +
                              to_string(index));
}

std::string to_string(MultiIndex index) {
  return "(" + std::to_string(index.dx) + "," + std::to_string(index.dt) + ")";
}

Jet::Jet(const JetArray& values, std::span<const MultiIndex> orders)
    : present_(1u) {
  values_[0] = values[0];
  for (MultiIndex m : orders) {
    const std::size_t s = require_slot(m);
    values_[s] = values[s];
    present_ |= static_cast<std::uint8_t>(1u << s);
  }
}

Jet Jet::full(const JetArray& values) {
  Jet j;
  j.values_ = values;
  j.present_ = 0x3f;
  return j;
}

bool Jet::has(MultiIndex index) const {
  auto s = slot_of(index);
  return s && (present_ >> *s) & 1u;
}

double Jet::at(MultiIndex index) const {
  const std::size_t s = require_slot(index);
  if (!((present_ >> s) & 1u)) {
    throw Error("jet entry " + to_string(index) + " was not computed");
  }
  return values_[s];
}

void Jet::set(MultiIndex index, double value) {
  const std::size_t s = require_slot(index);
  values_[s] = value;
  present_ |= static_cast<std::uint8_t>(1u << s);
}

}  // namespace btl::ad
