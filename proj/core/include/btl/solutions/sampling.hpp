#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "btl/autodiff/evaluate.hpp"
#include "btl/solutions/spec.hpp"

namespace btl::sol {

/// n points with exactly one point in each of the n equal strata of x and
/// of t. Deterministic per seed.
std::vector<ad::Point> latin_hypercube(std::size_t n, const Region& region,
                                       std::uint64_t seed);

/// values + level * sigma * g, sigma the sample standard deviation of
/// `values` and g standard normal draws.
std::vector<double> add_noise(std::span<const double> values, double level,
                              std::uint64_t seed);

struct SampleField {
  std::string name;
  SolutionSpec spec;
  bool complex = false;
  std::vector<double> re;
  std::vector<double> im;  // empty for real fields
};

/// Collocation points plus (possibly noisy) observed field values.
struct SampleSet {
  std::vector<ad::Point> points;
  std::vector<SampleField> fields;
  double noise_level = 0.0;
  std::uint64_t seed = 0;

  const SampleField& field(std::string_view name) const;

  /// Columns: x, t, then <name> or <name>_re, <name>_im per field.
  void write_csv(std::ostream& out) const;
  /// Solution specs, noise level and seed.
  void write_json(std::ostream& out) const;
};

/// Clean values of `spec` at `points`, with noise per component when
/// `noise_level` > 0.
SampleField sample_field(const std::string& name, const SolutionSpec& spec,
                         std::span<const ad::Point> points, double noise_level,
                         std::uint64_t seed);

}  // namespace btl::sol
