#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace btl::opt {

struct LbfgsOptions {
  int memory = 50;
  int max_iterations = 50000;
  double c1 = 1e-4;
  double c2 = 0.9;
  /// Stop when |L_k - L_{k-1}| < max(rel_tolerance * max(1, |L_k|), abs_tolerance).
  double rel_tolerance = 2.220446049250313e-16;
  double abs_tolerance = 0.0;
  /// Stop when ||g|| <= grad_tolerance (disabled at 0).
  double grad_tolerance = 0.0;
  int max_line_search = 40;

  void validate() const;
};

/// Writes the gradient into `grad` and returns the loss.
using LossFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

/// One accepted iteration and the line-search data that accepted it.
struct LbfgsIteration {
  int iteration = 0;
  double loss = 0.0;
  double previous_loss = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  double slope0 = 0.0;  // phi'(0)
  double slope = 0.0;   // phi'(step)
  int evaluations = 0;
};

enum class LbfgsStop { Stationary, Stagnation, MaxIterations, LineSearchFailure, Callback };

struct LbfgsResult {
  std::vector<double> x;
  std::vector<double> grad;
  double loss = 0.0;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStop stop = LbfgsStop::MaxIterations;
  bool line_search_failed = false;
  std::vector<LbfgsIteration> trace;
};

std::string to_string(LbfgsStop stop);

/// Called after each accepted iteration with the new iterate; returning
/// false stops the run.
using LbfgsCallback = std::function<bool(const LbfgsIteration&, std::span<const double> x)>;

/// Limited-memory BFGS (two-loop recursion) with a strong-Wolfe line search.
/// Throws NonFiniteError if the starting loss or gradient is not finite.
LbfgsResult lbfgs_minimize(const LossFn& fn, std::vector<double> x0, const LbfgsOptions& opts,
                           const LbfgsCallback& callback = {});

}  // namespace btl::opt
