#include "btl/autodiff/graph.hpp"

#include <cmath>
#include <string>

#include "btl/error.hpp"

namespace btl::ad {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::InputX: return "input_x";
    case NodeKind::InputT: return "input_t";
    case NodeKind::Data: return "data";
    case NodeKind::Param: return "param";
    case NodeKind::Const: return "const";
    case NodeKind::Unary: return "unary";
    case NodeKind::Binary: return "binary";
    case NodeKind::Affine: return "affine";
    case NodeKind::Entry: return "entry";
  }
  return "?";
}

std::string_view to_string(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "neg";
    case UnaryOp::Recip: return "recip";
    case UnaryOp::Pow: return "pow";
    case UnaryOp::Tanh: return "tanh";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Sinh: return "sinh";
    case UnaryOp::Cosh: return "cosh";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Atan: return "atan";
  }
  return "?";
}

NodeId Graph::push(const Node& n) {
  nodes_.push_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Graph::check_operand(NodeId id) const {
  if (id >= nodes_.size()) {
    throw Error("graph operand " + std::to_string(id) + " does not exist");
  }
}

void Graph::check_slot(SlotId slot) const {
  if (slot >= param_init_.size()) {
    throw Error("parameter slot " + std::to_string(slot) +
                " is not registered");
  }
}

NodeId Graph::input_x() {
  if (x_ == kNone) x_ = push({.kind = NodeKind::InputX});
  return x_;
}

NodeId Graph::input_t() {
  if (t_ == kNone) t_ = push({.kind = NodeKind::InputT});
  return t_;
}

NodeId Graph::data(std::uint32_t channel) {
  if (channel + 1 > data_channels_) data_channels_ = channel + 1;
  return push({.kind = NodeKind::Data, .arg = static_cast<std::int32_t>(channel)});
}

NodeId Graph::constant(double value) {
  if (!std::isfinite(value)) throw Error("non-finite graph constant");
  return push({.kind = NodeKind::Const, .value = value});
}

NodeId Graph::param(SlotId slot) {
  check_slot(slot);
  return push({.kind = NodeKind::Param, .arg = static_cast<std::int32_t>(slot)});
}

NodeId Graph::unary(UnaryOp op, NodeId a, int exponent) {
  check_operand(a);
  if (op == UnaryOp::Pow && (exponent < 1 || exponent > 4)) {
    throw Error("integer power must be in 1..4, got " +
                std::to_string(exponent));
  }
  return push({.kind = NodeKind::Unary,
               .op = static_cast<std::uint8_t>(op),
               .arg = op == UnaryOp::Pow ? exponent : 0,
               .a = a});
}

NodeId Graph::binary(BinaryOp op, NodeId a, NodeId b) {
  check_operand(a);
  check_operand(b);
  return push({.kind = NodeKind::Binary,
               .op = static_cast<std::uint8_t>(op),
               .a = a,
               .b = b});
}

NodeId Graph::affine(std::span<const NodeId> inputs, SlotId first_weight,
                     SlotId bias) {
  if (inputs.empty()) throw Error("affine node needs at least one input");
  for (NodeId id : inputs) check_operand(id);
  check_slot(first_weight);
  check_slot(first_weight + static_cast<SlotId>(inputs.size()) - 1);
  check_slot(bias);
  const auto first = static_cast<std::uint32_t>(operands_.size());
  operands_.insert(operands_.end(), inputs.begin(), inputs.end());
  return push({.kind = NodeKind::Affine,
               .arg = static_cast<std::int32_t>(first_weight),
               .b = bias,
               .first = first,
               .count = static_cast<std::uint32_t>(inputs.size())});
}

NodeId Graph::entry(NodeId a, MultiIndex index) {
  check_operand(a);
  const std::size_t s = require_slot(index);
  return push({.kind = NodeKind::Entry,
               .arg = static_cast<std::int32_t>(s),
               .a = a});
}

SlotId Graph::add_param_slot(double initial) {
  param_init_.push_back(initial);
  return static_cast<SlotId>(param_init_.size() - 1);
}

SlotId Graph::add_param_slots(std::size_t n, double initial) {
  const auto first = static_cast<SlotId>(param_init_.size());
  param_init_.resize(param_init_.size() + n, initial);
  return first;
}

void Graph::set_initial_param(SlotId slot, double value) {
  check_slot(slot);
  param_init_[slot] = value;
}

Ex Graph::ex(NodeId id) {
  check_operand(id);
  return {this, id};
}

namespace {

Graph& same_graph(Ex a, Ex b) {
  if (a.graph() == nullptr || a.graph() != b.graph()) {
    throw Error("expressions belong to different graphs");
  }
  return *a.graph();
}

Ex lift(Ex like, double c) { return like.graph()->ex(like.graph()->constant(c)); }

Ex un(UnaryOp op, Ex a, int exponent = 0) {
  return {a.graph(), a.graph()->unary(op, a.id(), exponent)};
}

}  // namespace

Ex operator+(Ex a, Ex b) {
  return {a.graph(), same_graph(a, b).binary(BinaryOp::Add, a.id(), b.id())};
}
Ex operator-(Ex a, Ex b) {
  return {a.graph(), same_graph(a, b).binary(BinaryOp::Sub, a.id(), b.id())};
}
Ex operator*(Ex a, Ex b) {
  return {a.graph(), same_graph(a, b).binary(BinaryOp::Mul, a.id(), b.id())};
}
Ex operator/(Ex a, Ex b) { return a * recip(b); }
Ex operator-(Ex a) { return un(UnaryOp::Neg, a); }

Ex operator+(Ex a, double c) { return a + lift(a, c); }
Ex operator+(double c, Ex a) { return lift(a, c) + a; }
Ex operator-(Ex a, double c) { return a - lift(a, c); }
Ex operator-(double c, Ex a) { return lift(a, c) - a; }
Ex operator*(Ex a, double c) { return a * lift(a, c); }
Ex operator*(double c, Ex a) { return lift(a, c) * a; }
Ex operator/(Ex a, double c) { return a * lift(a, 1.0 / c); }
Ex operator/(double c, Ex a) { return lift(a, c) * recip(a); }

Ex tanh(Ex a) { return un(UnaryOp::Tanh, a); }
Ex sin(Ex a) { return un(UnaryOp::Sin, a); }
Ex cos(Ex a) { return un(UnaryOp::Cos, a); }
Ex sinh(Ex a) { return un(UnaryOp::Sinh, a); }
Ex cosh(Ex a) { return un(UnaryOp::Cosh, a); }
Ex exp(Ex a) { return un(UnaryOp::Exp, a); }
Ex atan(Ex a) { return un(UnaryOp::Atan, a); }
Ex recip(Ex a) { return un(UnaryOp::Recip, a); }
Ex sech(Ex a) { return recip(cosh(a)); }
Ex pow(Ex a, int exponent) { return un(UnaryOp::Pow, a, exponent); }
Ex entry(Ex a, MultiIndex index) {
  return {a.graph(), a.graph()->entry(a.id(), index)};
}

}  // namespace btl::ad
