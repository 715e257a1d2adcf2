#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "btl/autodiff/graph.hpp"
#include "btl/autodiff/jet.hpp"

namespace btl::ad {

struct Point {
  double x = 0.0;
  double t = 0.0;
};

struct EvalStats {
  std::uint64_t forward_passes = 0;
  std::uint64_t unary_evals = 0;
  std::uint64_t affine_evals = 0;
};

/// Per-thread scratch space: one jet and one adjoint jet per node.
class Workspace {
 public:
  explicit Workspace(const Graph& graph);

  const JetArray& jet(NodeId id) const { return jets_[id]; }
  const JetArray& adjoint(NodeId id) const { return adjoints_[id]; }

  EvalStats stats;

 private:
  friend void forward(const Graph&, std::span<const double>, Point,
                      std::span<const JetArray>, Workspace&, NodeId);
  friend void backward(const Graph&, std::span<const double>, NodeId, double,
                       Workspace&, std::span<double>);

  std::vector<JetArray> jets_;
  std::vector<JetArray> adjoints_;
};

/// Propagates truncated Taylor jets through nodes [0, last]. Throws
/// NonFiniteError naming the first node whose jet is not finite.
void forward(const Graph& graph, std::span<const double> params, Point point,
             std::span<const JetArray> data, Workspace& ws,
             NodeId last = ~NodeId{0});

/// Reverse pass over the jet computation seeded with d(out)/d(seed value) =
/// weight. Adds into `grad` (indexed by parameter slot). Requires a prior
/// forward() covering `seed`.
void backward(const Graph& graph, std::span<const double> params, NodeId seed,
              double weight, Workspace& ws, std::span<double> grad);

/// Exact partial derivatives of `node` at `point` for the requested orders.
Jet eval_jet(const Graph& graph, NodeId node, std::span<const double> params,
             Point point, std::span<const MultiIndex> orders,
             std::span<const JetArray> data = {});

/// d(value of `loss`)/d(param) for each slot in `slots`, differentiating
/// through any jet entries the loss depends on.
std::vector<double> grad_params(const Graph& graph, NodeId loss,
                                std::span<const double> params, Point point,
                                std::span<const SlotId> slots,
                                std::span<const JetArray> data = {});

/// Derivatives f, f', f'', f''', f'''' of a unary op at z.
std::array<double, 5> unary_derivatives(UnaryOp op, int exponent, double z);

}  // namespace btl::ad
