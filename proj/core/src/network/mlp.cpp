#include "btl/network/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "btl/error.hpp"

namespace btl::net {

void MlpSpec::validate() const {
  if (hidden_layers < 1) throw ConfigError("network needs at least one hidden layer");
  if (width < 1) throw ConfigError("network width must be positive");
  if (outputs < 1) throw ConfigError("network needs at least one output");
}

ParamVector::ParamVector(const MlpSpec& spec) : spec_(spec) {
  spec_.validate();
  std::size_t offset = 0;
  std::size_t fan_in = 2;
  for (int l = 0; l <= spec_.hidden_layers; ++l) {
    const std::size_t fan_out = l == spec_.hidden_layers
                                    ? static_cast<std::size_t>(spec_.outputs)
                                    : static_cast<std::size_t>(spec_.width);
    LayerLayout layer{fan_in, fan_out, offset, offset + fan_in * fan_out};
    offset = layer.bias + fan_out;
    layers_.push_back(layer);
    fan_in = fan_out;
  }
  values_.assign(offset, 0.0);
}

std::size_t ParamVector::count_for(const MlpSpec& spec) {
  return ParamVector(spec).size();
}

void ParamVector::glorot_init() {
  std::mt19937_64 rng(spec_.seed);
  for (const LayerLayout& layer : layers_) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.fan_in + layer.fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (std::size_t k = 0; k < layer.fan_in * layer.fan_out; ++k) {
      values_[layer.weights + k] = dist(rng);
    }
    for (std::size_t k = 0; k < layer.fan_out; ++k) values_[layer.bias + k] = 0.0;
  }
}

void ParamVector::assign(std::span<const double> flat) {
  if (flat.size() != values_.size()) {
    throw Error("parameter vector length mismatch: expected " +
                std::to_string(values_.size()) + ", got " +
                std::to_string(flat.size()));
  }
  values_.assign(flat.begin(), flat.end());
}

void ParamVector::write(std::ostream& out) const {
  out << "btl-params 1\n"
      << "hidden_layers " << spec_.hidden_layers << "\n"
      << "width " << spec_.width << "\n"
      << "outputs " << spec_.outputs << "\n"
      << "seed " << spec_.seed << "\n"
      << "count " << values_.size() << "\n";
  char buf[32];
  for (double v : values_) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << "\n";
  }
}

namespace {

template <class T>
T read_field(std::istream& in, const std::string& key) {
  std::string name;
  T value{};
  if (!(in >> name >> value) || name != key) {
    throw Error("malformed parameter checkpoint: expected '" + key + "'");
  }
  return value;
}

}  // namespace

ParamVector ParamVector::read(std::istream& in) {
  if (read_field<int>(in, "btl-params") != 1) {
    throw Error("unsupported parameter checkpoint version");
  }
  MlpSpec spec;
  spec.hidden_layers = read_field<int>(in, "hidden_layers");
  spec.width = read_field<int>(in, "width");
  spec.outputs = read_field<int>(in, "outputs");
  spec.seed = read_field<std::uint64_t>(in, "seed");
  const auto count = read_field<std::size_t>(in, "count");
  ParamVector pv(spec);
  if (count != pv.size()) throw Error("parameter checkpoint count does not match spec");
  std::string token;
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> token)) throw Error("truncated parameter checkpoint");
    pv.values_[i] = std::stod(token);
  }
  return pv;
}

MlpNodes add_mlp(ad::Graph& graph, const ParamVector& params, ad::NodeId x,
                 ad::NodeId t) {
  MlpNodes out;
  out.first_slot = graph.add_param_slots(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    graph.set_initial_param(out.first_slot + static_cast<ad::SlotId>(i),
                            params.values()[i]);
  }
  const auto layers = params.layers();
  std::vector<ad::NodeId> inputs{x, t};
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerLayout& layer = layers[l];
    const bool last = l + 1 == layers.size();
    std::vector<ad::NodeId> next;
    next.reserve(layer.fan_out);
    for (std::size_t j = 0; j < layer.fan_out; ++j) {
      const auto w = out.first_slot +
                     static_cast<ad::SlotId>(layer.weights + j * layer.fan_in);
      const auto b = out.first_slot + static_cast<ad::SlotId>(layer.bias + j);
      const ad::NodeId z = graph.affine(inputs, w, b);
      next.push_back(last ? z : graph.unary(ad::UnaryOp::Tanh, z));
    }
    inputs = std::move(next);
  }
  out.outputs = std::move(inputs);
  return out;
}

Network mlp_new(const MlpSpec& spec) {
  ParamVector params(spec);
  params.glorot_init();
  ad::Graph graph;
  const ad::NodeId x = graph.input_x();
  const ad::NodeId t = graph.input_t();
  MlpNodes nodes = add_mlp(graph, params, x, t);
  return {std::move(graph), std::move(nodes.outputs), std::move(params)};
}

ad::Jet field_jet(const Network& net, std::size_t output, ad::Point point,
                  std::span<const ad::MultiIndex> orders) {
  if (output >= net.outputs.size()) {
    throw Error("network output index " + std::to_string(output) + " out of range");
  }
  return ad::eval_jet(net.graph, net.outputs[output], net.params.values(), point,
                      orders);
}

std::vector<ad::JetArray> all_field_jets(const Network& net, ad::Point point,
                                         ad::Workspace& ws) {
  ad::forward(net.graph, net.params.values(), point, {}, ws);
  std::vector<ad::JetArray> out;
  out.reserve(net.outputs.size());
  for (ad::NodeId id : net.outputs) out.push_back(ws.jet(id));
  return out;
}

}  // namespace btl::net
