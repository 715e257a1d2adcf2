#pragma once

#include <optional>

#include "btl/autodiff/evaluate.hpp"
#include "btl/autodiff/graph.hpp"
#include "btl/autodiff/jet.hpp"
#include "btl/solutions/spec.hpp"

namespace btl::sol {

struct ClosedFormNodes {
  ad::NodeId re = 0;
  std::optional<ad::NodeId> im;  // set for complex families only
};

/// Appends the closed form of `spec` as an expression of the given x and t
/// nodes. Validates the spec first.
ClosedFormNodes build_closed_form(ad::Graph& graph, const SolutionSpec& spec,
                                  ad::NodeId x, ad::NodeId t);

/// A closed-form solution compiled once into its own graph.
class SolutionField {
 public:
  explicit SolutionField(const SolutionSpec& spec);

  const SolutionSpec& spec() const { return spec_; }
  bool complex() const { return nodes_.im.has_value(); }

  /// Full jets (re, im); im is zero for real families.
  std::pair<ad::JetArray, ad::JetArray> jets(ad::Point p, ad::Workspace& ws) const;
  std::pair<ad::JetArray, ad::JetArray> jets(ad::Point p) const;

  const ad::Graph& graph() const { return graph_; }

 private:
  SolutionSpec spec_;
  ad::Graph graph_;
  ClosedFormNodes nodes_;
};

/// Value and all supported derivatives of the closed form at `point`.
ad::ComplexJet eval_solution(const SolutionSpec& spec, ad::Point point);

}  // namespace btl::sol
