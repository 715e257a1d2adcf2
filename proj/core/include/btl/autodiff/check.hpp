#pragma once

#include <functional>
#include <span>

#include "btl/autodiff/evaluate.hpp"

namespace btl::ad {

struct DerivativeCheck {
  double ad_value = 0.0;
  double fd_value = 0.0;
  double rel_err = 0.0;  // |ad - fd| / max(1, |fd|)
};

/// Central finite difference of order `index` of a scalar function of
/// (x, t), Richardson-extrapolated once. The stencil half-width for a
/// derivative of total order k is step^(2/(k+1)), which keeps cancellation
/// error of third differences near the truncation error.
double central_difference(const std::function<double(double, double)>& f,
                          Point point, MultiIndex index, double step);

/// Compares the jet entry of `node` against central finite differences of
/// its value.
DerivativeCheck check_derivative(const Graph& graph, NodeId node,
                                 std::span<const double> params, Point point,
                                 MultiIndex index, double step);

}  // namespace btl::ad
