#include "btl/autodiff/check.hpp"

#include <algorithm>
#include <cmath>

#include "btl/error.hpp"

namespace btl::ad {

namespace {

double stencil(const std::function<double(double, double)>& f, double x,
               double t, MultiIndex index, double h) {
  const int order = index.dx + index.dt;
  if (order == 0) return f(x, t);
  if (index == MultiIndex{1, 0}) return (f(x + h, t) - f(x - h, t)) / (2 * h);
  if (index == MultiIndex{0, 1}) return (f(x, t + h) - f(x, t - h)) / (2 * h);
  if (index == MultiIndex{2, 0}) {
    return (f(x + h, t) - 2 * f(x, t) + f(x - h, t)) / (h * h);
  }
  if (index == MultiIndex{1, 1}) {
    return (f(x + h, t + h) - f(x + h, t - h) - f(x - h, t + h) +
            f(x - h, t - h)) /
           (4 * h * h);
  }
  if (index == MultiIndex{3, 0}) {
    return (f(x + 2 * h, t) - 2 * f(x + h, t) + 2 * f(x - h, t) -
            f(x - 2 * h, t)) /
           (2 * h * h * h);
  }
  throw UnsupportedIndexError("no finite-difference stencil for " +
                              to_string(index));
}

}  // namespace

double central_difference(const std::function<double(double, double)>& f,
                          Point point, MultiIndex index, double step) {
  if (!(step > 0)) throw Error("finite-difference step must be positive");
  require_slot(index);
  const int order = index.dx + index.dt;
  if (order == 0) return f(point.x, point.t);
  const double h = std::pow(step, 2.0 / (order + 1));
  const double coarse = stencil(f, point.x, point.t, index, h);
  const double fine = stencil(f, point.x, point.t, index, h / 2);
  return (4 * fine - coarse) / 3;
}

DerivativeCheck check_derivative(const Graph& graph, NodeId node,
                                 std::span<const double> params, Point point,
                                 MultiIndex index, double step) {
  Workspace ws(graph);
  forward(graph, params, point, {}, ws, node);
  DerivativeCheck out;
  out.ad_value = ws.jet(node)[require_slot(index)];
  auto value = [&](double x, double t) {
    forward(graph, params, {x, t}, {}, ws, node);
    return ws.jet(node)[0];
  };
  out.fd_value = central_difference(value, point, index, step);
  out.rel_err =
      std::abs(out.ad_value - out.fd_value) / std::max(1.0, std::abs(out.fd_value));
  return out;
}

}  // namespace btl::ad
