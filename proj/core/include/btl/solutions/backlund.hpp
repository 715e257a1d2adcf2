#pragma once

#include <span>
#include <vector>

#include "btl/autodiff/evaluate.hpp"
#include "btl/solutions/closed_form.hpp"

namespace btl::sol {

/// Sine-Gordon solutions generated from a closed-form seed by repeated
/// application of the auto-BT
///   q_x = p_x - 2 beta sin((p+q)/2),  q_t = -p_t + (2/beta) sin((p-q)/2).
/// Values are integrated from an anchor point, first along t and then along
/// x; derivatives follow from the transform itself, so the transform and
/// the equation hold exactly on the returned jets.
class SgBacklundChain {
 public:
  /// One image per entry of `betas`; `anchors` are the image values at
  /// `anchor_point`.
  SgBacklundChain(const SolutionSpec& seed, std::vector<double> betas,
                  std::vector<double> anchors, ad::Point anchor_point = {});

  std::size_t folds() const { return betas_.size(); }

  /// Jets of seed (index 0) and each image at every point.
  std::vector<std::vector<ad::JetArray>> jets(std::span<const ad::Point> points) const;
  std::vector<ad::JetArray> jets(ad::Point p) const;

  /// Full jet of the image of p with image value q.
  static ad::JetArray image_jet(const ad::JetArray& p, double q, double beta);

  double tolerance = 1e-10;

 private:
  std::vector<ad::JetArray> chain_at(ad::Point p, std::span<const double> values) const;

  SolutionField seed_;
  std::vector<double> betas_;
  std::vector<double> anchors_;
  ad::Point anchor_;
};

}  // namespace btl::sol
