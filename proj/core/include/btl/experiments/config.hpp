#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "btl/solutions/spec.hpp"

namespace btl::xp {

enum class Study {
  SgAbt,
  ComplexMiura,
  RealMiura,
  FocusingMkdvViaMiura,
  DefocusingMkdvViaMiura,
  BteMkdv,
  BteSg,
};

enum class SchemeTag { BtDiscovery, EquationViaBt, BteExplicit, BteImplicit, PinnBaseline };

struct SchemeId {
  SchemeTag tag = SchemeTag::BtDiscovery;
  int fold = 0;  // 1 or 2 for BTE schemes, 0 otherwise

  void validate() const;
  friend bool operator==(const SchemeId&, const SchemeId&) = default;
};

std::string_view to_string(Study study);
Study study_from_string(std::string_view name);
std::string_view to_string(SchemeTag tag);
SchemeTag scheme_from_string(std::string_view name);

struct OptimizerSchedule {
  int adam_steps = 5000;
  double adam_lr = 1e-3;
  std::size_t batch_size = 0;  // 0 = full batch
  int coefficient_warmup = 0;  // leading Adam steps with coefficients frozen
  int lbfgs_steps = 5000;
  int lbfgs_memory = 50;
  double lbfgs_rel_tolerance = 2.220446049250313e-16;
  double lbfgs_abs_tolerance = 0.0;
  double lbfgs_grad_tolerance = 0.0;
};

/// Everything that defines one training run. Parsed from and serialized to
/// a sectioned key = value text format.
struct ExperimentConfig {
  std::string name;
  Study study = Study::SgAbt;
  SchemeId scheme;
  char case_label = 'A';
  std::uint64_t seed = 1;

  /// Parameters of the study's exact solutions, complete after defaults.
  std::map<std::string, double> solution;

  std::vector<std::string> free;  // trainable coefficient names
  double initial = 1.0;           // starting value of every free coefficient
  double beta = 1.0;              // sine-Gordon auto-BT parameter

  sol::Region region;
  std::size_t points = 10000;
  double noise = 0.0;

  int hidden_layers = 5;
  int width = 40;
  bool shared = true;

  OptimizerSchedule optimizer;
  int threads = 1;
  int chunks = 8;  // fixed reduction blocks, independent of threads

  int grid = 101;

  void validate() const;
};

/// Full-scale settings of a study, scheme and case.
ExperimentConfig default_config(Study study, SchemeId scheme, char case_label);

/// Allowed scheme tags for a study.
std::vector<SchemeTag> schemes_for(Study study);

/// Throws ConfigError on syntax errors, unknown sections or keys, and
/// invalid values.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text: fixed section and key order, every key present.
std::string serialize_config(const ExperimentConfig& config);

/// 64-bit FNV-1a of the canonical text.
std::uint64_t config_hash(const ExperimentConfig& config);
std::uint64_t fnv1a(std::string_view bytes);

/// Independent stream seed derived from a run seed and a purpose tag.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace btl::xp
