#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "btl/residuals/params.hpp"
#include "btl/residuals/residuals.hpp"
#include "btl/solutions/spec.hpp"

namespace btl::xp {

enum class Study;
struct ExperimentConfig;

/// One unknown field of a scheme.
struct FieldDef {
  std::string name;
  bool complex = false;
  bool data = false;  // carries a data loss
  /// Exact solution, when it has a closed form.
  std::optional<sol::SolutionSpec> closed_form;
  /// > 0: the exact field is this image of the sine-Gordon auto-BT chain.
  int backlund_fold = 0;
};

enum class TermKind { Data, Equation, Transform };
enum class TransformKind { Abt, MiuraComplex, MiuraReal };

/// One mean-squared loss term. Complex residuals contribute re^2 + im^2.
struct LossTerm {
  std::string name;
  std::string part;
  TermKind kind = TermKind::Data;
  std::size_t field = 0;
  std::size_t other = 0;  // transforms: the second field
  res::PdeId pde;         // equations
  TransformKind transform = TransformKind::Abt;
  int component = 0;  // auto-BT: 0 for the x relation, 1 for the t relation
  /// Coefficients bound to constants for this term; the rest are read from
  /// the experiment's EquationParams.
  std::map<std::string, double> constants;
};

/// Fields, coefficients and loss terms of one configured experiment.
struct Problem {
  std::vector<FieldDef> fields;
  res::EquationParams coefficients;
  std::vector<LossTerm> terms;
  std::vector<std::string> parts;  // in reporting order
  bool report_bd = false;          // report b*d (aBT discovery)

  std::size_t field_index(const std::string& name) const;
};

/// Coefficient names a study can learn.
std::vector<std::string> study_coefficients(Study study);
/// Free coefficients of a study's case A or B.
std::vector<std::string> default_free(Study study, char case_label);
/// Exact coefficient values of a study.
std::map<std::string, double> exact_coefficients(Study study, double beta);

/// Throws ConfigError when the configuration is inconsistent.
Problem make_problem(const ExperimentConfig& config);

}  // namespace btl::xp
