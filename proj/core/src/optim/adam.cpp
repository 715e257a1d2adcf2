#include "btl/optim/adam.hpp"

#include <cmath>
#include <string>

#include "btl/error.hpp"

namespace btl::opt {

AdamState::AdamState(std::size_t n, AdamOptions opts)
    : options(opts), m(n, 0.0), v(n, 0.0) {
  if (!(opts.lr > 0) || !(opts.beta1 >= 0 && opts.beta1 < 1) ||
      !(opts.beta2 >= 0 && opts.beta2 < 1) || !(opts.eps >= 0)) {
    throw ConfigError("invalid Adam hyperparameters");
  }
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& s) {
  if (params.size() != grads.size() || params.size() != s.m.size()) {
    throw Error("adam_step length mismatch");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NonFiniteError("non-finite gradient component " + std::to_string(i),
                           static_cast<std::int64_t>(i));
    }
  }
  ++s.step;
  const auto& o = s.options;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(s.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    s.m[i] = o.beta1 * s.m[i] + (1.0 - o.beta1) * g;
    s.v[i] = o.beta2 * s.v[i] + (1.0 - o.beta2) * g * g;
    const double mhat = s.m[i] / c1;
    const double vhat = s.v[i] / c2;
    params[i] -= o.lr * mhat / (std::sqrt(vhat) + o.eps);
  }
}

}  // namespace btl::opt
