#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "btl/error.hpp"
#include "btl/experiments/config.hpp"
#include "btl/experiments/experiment.hpp"

namespace btl::xp {

inline constexpr int kReportSchemaVersion = 1;

struct CoefficientReport {
  std::string name;
  bool free = false;
  double learned = 0.0;
  double exact = 0.0;
  double error = 0.0;  // |learned - exact|
};

struct NamedValue {
  std::string name;
  double value = 0.0;
};

struct TraceRow {
  std::string phase;  // "adam" or "lbfgs"
  int iteration = 0;
  double total = 0.0;
  std::vector<double> parts;
  std::vector<double> coefficients;  // free coefficients in free_slots() order
};

struct TrainReport {
  std::string name;
  std::string study;
  std::string scheme;
  int fold = 0;
  char case_label = 'A';
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  double noise = 0.0;
  std::size_t points = 0;
  std::string status = "ok";  // "ok" or "diverged"

  std::vector<CoefficientReport> coefficients;
  std::optional<double> bd;  // b*d for aBT discovery, exact value 4
  std::optional<double> bd_error;
  std::vector<NamedValue> field_errors;  // relative L2 on the report grid
  double loss_total = 0.0;
  std::vector<NamedValue> loss_parts;
  std::vector<NamedValue> loss_terms;
  double initial_data_loss = 0.0;
  double final_data_loss = 0.0;

  int adam_steps = 0;
  int lbfgs_iterations = 0;
  int lbfgs_evaluations = 0;
  std::string lbfgs_stop;

  double wall_seconds = 0.0;
  std::vector<TraceRow> trace;

  /// Largest |learned - exact| over free coefficients.
  double max_coefficient_error() const;
};

/// Raised after partial artifacts are written when training produces a
/// non-finite loss or gradient.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, TrainReport partial)
      : Error(what), report_(std::move(partial)) {}
  const TrainReport& report() const { return report_; }

 private:
  TrainReport report_;
};

struct RunOptions {
  /// Artifacts are written here when set.
  std::optional<std::filesystem::path> out_dir;
  /// Starting parameters instead of the seeded initialization.
  std::optional<std::vector<double>> initial_params;
  /// Progress lines for a terminal.
  std::function<void(const std::string&)> log;
  /// Keep every trace row in the returned report.
  bool keep_trace = true;
};

struct RunResult {
  TrainReport report;
  std::vector<double> params;
};

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// ||pred - exact||_2 / ||exact||_2. Throws Error on a size mismatch or a
/// zero-norm exact grid.
double relative_l2_error(std::span<const double> pred, std::span<const double> exact);

/// Uniform resolution x resolution mesh over the region, t-major.
std::vector<ad::Point> report_grid(const sol::Region& region, int resolution);

/// Relative L2 errors of the closed-form fields of `experiment`.
std::vector<NamedValue> field_errors(const Experiment& experiment, std::span<const double> params);

/// Grid CSV with x, t and exact, predicted, abs error per field component.
/// Fields without a closed form get a predicted column only. Without
/// `params` only exact columns are written.
void write_grid(const Experiment& experiment, const std::vector<double>* params, std::ostream& out);

std::string report_json(const TrainReport& report);
void write_trace(const TrainReport& report, const std::vector<std::string>& part_names,
                 const std::vector<std::string>& coefficient_names, std::ostream& out);

/// Whitespace-separated parameter checkpoint.
void write_params(std::span<const double> params, std::ostream& out);
std::vector<double> read_params(std::istream& in);

struct SchemeComparison {
  std::vector<std::uint64_t> seeds;
  std::vector<double> error_a;
  std::vector<double> error_b;
  double win_fraction_a = 0.0;  // ties count one half
};

/// Runs both configs per seed and compares max coefficient errors. Throws
/// ConfigError when the two configs do not target the same coefficients.
SchemeComparison compare_schemes(const ExperimentConfig& a, const ExperimentConfig& b,
                                 std::span<const std::uint64_t> seeds,
                                 const std::function<void(const std::string&)>& log = {});

/// Win fraction of the first error list; ties count one half.
double win_fraction(std::span<const double> error_a, std::span<const double> error_b);

}  // namespace btl::xp
