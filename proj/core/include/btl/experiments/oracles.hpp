#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "btl/experiments/config.hpp"

namespace btl::xp {

struct CheckResult {
  std::string name;
  double value = 0.0;  // worst observed error
  double tolerance = 0.0;
  bool pass = false;
};

/// Max PDE residual of every solution family on a grid over the region of
/// the experiments that use it. `kink_phase_rate` = 1 reproduces the
/// misprinted kink phase.
std::vector<CheckResult> solution_residual_checks(double kink_phase_rate = 2.0,
                                                  int resolution = 101);

/// Complex and real Miura images against their closed forms at random
/// points.
std::vector<CheckResult> miura_identity_checks(std::size_t points = 10000,
                                               std::uint64_t seed = 1);

/// Jets of random tanh networks against finite differences, and the
/// parameter gradient of a residual loss against finite differences.
std::vector<CheckResult> autodiff_checks(int networks, int points, std::uint64_t seed);

/// Every loss part with exact fields and exact coefficients substituted.
/// `max_points` > 0 caps the collocation set.
CheckResult wiring_check(const ExperimentConfig& config, std::size_t max_points = 0);

}  // namespace btl::xp
