#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "btl/autodiff/jet.hpp"

namespace btl::ad {

using NodeId = std::uint32_t;
using SlotId = std::uint32_t;

enum class NodeKind : std::uint8_t {
  InputX,
  InputT,
  Data,    // per-point jet supplied by the caller (channel = arg)
  Param,   // trainable scalar (slot = arg)
  Const,
  Unary,
  Binary,
  Affine,  // bias + sum_i w_i * in_i, weights in consecutive slots
  Entry,   // one jet entry of `a`, treated as constant in (x, t)
};

enum class UnaryOp : std::uint8_t {
  Neg,
  Recip,
  Pow,  // integer exponent in arg, 1..4
  Tanh,
  Sin,
  Cos,
  Sinh,
  Cosh,
  Exp,
  Atan,
};

enum class BinaryOp : std::uint8_t { Add, Sub, Mul };

std::string_view to_string(NodeKind kind);
std::string_view to_string(UnaryOp op);

struct Node {
  NodeKind kind{};
  std::uint8_t op = 0;
  std::int32_t arg = 0;
  NodeId a = 0;
  NodeId b = 0;  // Affine: bias slot
  std::uint32_t first = 0;
  std::uint32_t count = 0;
  double value = 0.0;
};

class Ex;

/// Append-only expression DAG over the inputs x and t. Operands always
/// precede their users, so node order is a topological order.
///
/// Build a graph on one thread, then share it read-only: evaluation only
/// needs `const Graph&` plus a per-thread Workspace.
class Graph {
 public:
  Graph() = default;

  NodeId input_x();
  NodeId input_t();
  NodeId data(std::uint32_t channel);
  NodeId constant(double value);
  NodeId param(SlotId slot);
  NodeId unary(UnaryOp op, NodeId a, int exponent = 0);
  NodeId binary(BinaryOp op, NodeId a, NodeId b);
  NodeId affine(std::span<const NodeId> inputs, SlotId first_weight,
                SlotId bias);
  NodeId entry(NodeId a, MultiIndex index);

  SlotId add_param_slot(double initial = 0.0);
  /// Reserves `n` consecutive slots and returns the first.
  SlotId add_param_slots(std::size_t n, double initial = 0.0);

  Ex ex(NodeId id);

  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_[id]; }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const NodeId> operands() const { return operands_; }
  std::size_t param_count() const { return param_init_.size(); }
  std::span<const double> initial_params() const { return param_init_; }
  void set_initial_param(SlotId slot, double value);
  std::uint32_t data_channels() const { return data_channels_; }

 private:
  NodeId push(const Node& n);
  void check_operand(NodeId id) const;
  void check_slot(SlotId slot) const;

  std::vector<Node> nodes_;
  std::vector<NodeId> operands_;
  std::vector<double> param_init_;
  std::uint32_t data_channels_ = 0;
  NodeId x_ = kNone;
  NodeId t_ = kNone;
  static constexpr NodeId kNone = ~NodeId{0};
};

/// Lightweight handle for building expressions with ordinary operators.
class Ex {
 public:
  Ex() = default;
  Ex(Graph* graph, NodeId id) : graph_(graph), id_(id) {}

  NodeId id() const { return id_; }
  Graph* graph() const { return graph_; }

  friend Ex operator+(Ex a, Ex b);
  friend Ex operator-(Ex a, Ex b);
  friend Ex operator*(Ex a, Ex b);
  friend Ex operator/(Ex a, Ex b);
  friend Ex operator-(Ex a);

  friend Ex operator+(Ex a, double c);
  friend Ex operator+(double c, Ex a);
  friend Ex operator-(Ex a, double c);
  friend Ex operator-(double c, Ex a);
  friend Ex operator*(Ex a, double c);
  friend Ex operator*(double c, Ex a);
  friend Ex operator/(Ex a, double c);
  friend Ex operator/(double c, Ex a);

 private:
  Graph* graph_ = nullptr;
  NodeId id_ = 0;
};

Ex tanh(Ex a);
Ex sin(Ex a);
Ex cos(Ex a);
Ex sinh(Ex a);
Ex cosh(Ex a);
Ex exp(Ex a);
Ex atan(Ex a);
Ex recip(Ex a);
Ex sech(Ex a);
Ex pow(Ex a, int exponent);
/// Jet entry of `a` as a scalar that is constant in (x, t).
Ex entry(Ex a, MultiIndex index);

}  // namespace btl::ad
