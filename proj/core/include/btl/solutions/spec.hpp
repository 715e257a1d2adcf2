#pragma once

#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace btl::sol {

/// Sine-Gordon breather in light-cone coordinates; k in [0, 1), mu != 0.
struct SgBreather {
  double k = 0.0;
  double mu = std::numbers::pi / 4;
  double x0 = 0.0;
};

/// Focusing mKdV bright soliton k sech(kx - k^3 t + x0).
struct MkdvBright {
  double k = 0.8;
  double x0 = 0.0;
};

/// Complex-Miura image of MkdvBright, a complex KdV solution.
struct KdvComplexSoliton {
  double k = 0.8;
  double x0 = 0.0;
};

/// Defocusing mKdV kink k tanh(kx + phase_rate k^3 t + x0). Only
/// phase_rate = 2 solves the equation; other values exist so the verifier
/// can demonstrate the residual failure.
struct MkdvKink {
  double k = 1.0;
  double x0 = 0.0;
  double phase_rate = 2.0;
};

/// Real-Miura image of MkdvKink: 2k^2 sech^2(kx + 2k^3 t + x0) - k^2.
struct KdvPedestalSoliton {
  double k = 1.0;
  double x0 = 0.0;
};

/// One-soliton produced by one Darboux step from the zero seed.
struct MkdvOneSolitonDT {
  double lambda1 = 0.25;
  double alpha1 = 1.0;
};

/// Two-soliton produced by a second Darboux step; lambda2 > lambda1 > 0.
struct MkdvTwoSolitonDT {
  double lambda1 = 0.25;
  double lambda2 = 1.0 / 3.0;
  double alpha1 = 1.0;
  double alpha2 = 2.0;
};

using SolutionSpec =
    std::variant<SgBreather, MkdvBright, KdvComplexSoliton, MkdvKink,
                 KdvPedestalSoliton, MkdvOneSolitonDT, MkdvTwoSolitonDT>;

enum class Family {
  SgBreather,
  MkdvBright,
  KdvComplexSoliton,
  MkdvKink,
  KdvPedestalSoliton,
  MkdvOneSolitonDT,
  MkdvTwoSolitonDT,
};

Family family_of(const SolutionSpec& spec);
std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

/// Throws DomainError when parameters are outside the family's domain.
void validate(const SolutionSpec& spec);

bool is_complex(const SolutionSpec& spec);

/// Named parameters in a fixed per-family order.
std::vector<std::pair<std::string, double>> parameters(const SolutionSpec& spec);

/// Builds a spec from a family and named parameters; unknown names are
/// errors, missing names take the family defaults.
SolutionSpec make_solution(Family family, const std::map<std::string, double>& params);

struct Region {
  double x_min = -1.0;
  double x_max = 1.0;
  double t_min = -1.0;
  double t_max = 1.0;

  void validate() const;
  friend bool operator==(const Region&, const Region&) = default;
};

}  // namespace btl::sol
