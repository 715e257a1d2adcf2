#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "btl/autodiff/evaluate.hpp"
#include "btl/autodiff/graph.hpp"

namespace btl::net {

/// Fully-connected tanh network from (x, t) to `outputs` linear heads.
struct MlpSpec {
  int hidden_layers = 5;
  int width = 40;
  int outputs = 1;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

struct LayerLayout {
  std::size_t fan_in = 0;
  std::size_t fan_out = 0;
  std::size_t weights = 0;  // offset of the fan_out x fan_in row-major block
  std::size_t bias = 0;     // offset of fan_out biases
};

/// Flat parameter storage with per-layer bookkeeping.
class ParamVector {
 public:
  explicit ParamVector(const MlpSpec& spec);

  static std::size_t count_for(const MlpSpec& spec);

  /// Glorot-uniform weights drawn from spec().seed, zero biases.
  void glorot_init();

  const MlpSpec& spec() const { return spec_; }
  std::span<const LayerLayout> layers() const { return layers_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::vector<double> flatten() const { return values_; }
  void assign(std::span<const double> flat);

  /// Text checkpoint: a header with the spec, then one value per line.
  void write(std::ostream& out) const;
  static ParamVector read(std::istream& in);

 private:
  MlpSpec spec_;
  std::vector<LayerLayout> layers_;
  std::vector<double> values_;
};

struct MlpNodes {
  std::vector<ad::NodeId> outputs;
  ad::SlotId first_slot = 0;
};

/// Appends the network to `graph`. Reserves params.size() consecutive slots
/// initialized from `params`; all outputs share the hidden layers.
MlpNodes add_mlp(ad::Graph& graph, const ParamVector& params, ad::NodeId x,
                 ad::NodeId t);

/// A standalone network whose graph slots coincide with its ParamVector.
struct Network {
  ad::Graph graph;
  std::vector<ad::NodeId> outputs;
  ParamVector params;
};

Network mlp_new(const MlpSpec& spec);

ad::Jet field_jet(const Network& net, std::size_t output, ad::Point point,
                  std::span<const ad::MultiIndex> orders);

/// Full jets of every output from a single forward pass.
std::vector<ad::JetArray> all_field_jets(const Network& net, ad::Point point,
                                         ad::Workspace& ws);

}  // namespace btl::net
