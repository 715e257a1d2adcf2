#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace btl::opt {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  explicit AdamState(std::size_t n, AdamOptions options = {});

  AdamOptions options;
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
};

/// One bias-corrected Adam update in place. Throws NonFiniteError on a
/// non-finite gradient component before touching any state.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

}  // namespace btl::opt
