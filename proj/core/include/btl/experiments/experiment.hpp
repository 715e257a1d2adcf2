#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "btl/autodiff/evaluate.hpp"
#include "btl/autodiff/graph.hpp"
#include "btl/experiments/config.hpp"
#include "btl/experiments/problem.hpp"
#include "btl/residuals/params.hpp"
#include "btl/solutions/sampling.hpp"

namespace btl::xp {

/// Network: every field is a network output. ExactOracle: every field is
/// replaced by its exact jets and coefficients by their exact values, with
/// noise-free data.
enum class FieldMode { Network, ExactOracle };

/// Mean-squared loss terms, their per-part sums and the total.
struct LossValue {
  double total = 0.0;
  std::vector<double> terms;
  std::vector<double> parts;
};

struct FieldNodes {
  ad::NodeId re = 0;
  std::optional<ad::NodeId> im;
};

struct FreeSlot {
  std::string name;
  ad::SlotId slot = 0;
};

/// Values of one field on a point set; im is empty for real fields.
struct FieldValues {
  std::string name;
  std::vector<double> re;
  std::vector<double> im;
};

/// A configured experiment compiled into a single loss graph over the
/// sampled collocation points.
class Experiment {
 public:
  explicit Experiment(const ExperimentConfig& config, FieldMode mode = FieldMode::Network);

  const ExperimentConfig& config() const { return config_; }
  const Problem& problem() const { return problem_; }
  FieldMode mode() const { return mode_; }
  const ad::Graph& graph() const { return graph_; }
  const sol::SampleSet& samples() const { return samples_; }
  std::span<const ad::Point> points() const { return samples_.points; }

  std::size_t param_count() const { return graph_.param_count(); }
  std::size_t network_param_count() const { return network_params_; }
  std::vector<double> initial_params() const;
  std::span<const FreeSlot> free_slots() const { return free_slots_; }

  /// Loss over all points; fills `grad` (size param_count()) when it is
  /// non-empty.
  LossValue loss(std::span<const double> params, std::span<double> grad = {}) const;
  /// Loss over a subset of point indices.
  LossValue loss_on(std::span<const double> params, std::span<const std::uint32_t> indices,
                    std::span<double> grad) const;

  /// Per-term squared residuals at sample point `i`.
  std::vector<double> point_terms(std::span<const double> params, std::size_t i) const;
  /// Full jets (re, im) of every field at sample point `i`.
  std::vector<std::pair<ad::JetArray, ad::JetArray>> field_jets(std::span<const double> params,
                                                                std::size_t i) const;
  /// Field values at arbitrary points. Network mode only.
  std::vector<FieldValues> predict(std::span<const double> params,
                                   std::span<const ad::Point> points) const;

  /// Coefficients with free entries read from `params`.
  res::EquationParams coefficients(std::span<const double> params) const;

  /// Sum of all data terms.
  double data_loss(const LossValue& value) const;

 private:
  void build_graph();
  void fill_point_data();
  std::span<const ad::JetArray> data_at(std::size_t i) const;

  ExperimentConfig config_;
  Problem problem_;
  FieldMode mode_;
  sol::SampleSet samples_;
  ad::Graph graph_;
  std::size_t network_params_ = 0;
  std::vector<FieldNodes> field_nodes_;
  std::vector<FreeSlot> free_slots_;
  std::vector<ad::NodeId> term_nodes_;
  std::vector<std::size_t> term_part_;
  ad::NodeId total_node_ = 0;
  ad::NodeId last_field_node_ = 0;
  std::size_t channels_ = 0;
  std::vector<ad::JetArray> point_data_;  // points x channels
};

}  // namespace btl::xp
