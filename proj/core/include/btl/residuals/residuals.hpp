#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "btl/autodiff/jet.hpp"
#include "btl/residuals/forms.hpp"
#include "btl/residuals/params.hpp"
#include "btl/solutions/spec.hpp"

namespace btl::res {

using forms::Monomial;

enum class PdeTag { SineGordon, GenSineGordon, FocusingMkdv, DefocusingMkdv, Kdv, GenMkdv };

struct Term {
  std::string coefficient;
  Monomial monomial;
  friend bool operator==(const Term&, const Term&) = default;
};

struct PdeId {
  PdeTag tag = PdeTag::SineGordon;
  /// GenMkdv only: u_t + sum coefficient * monomial.
  std::vector<Term> terms;

  /// u_t + a u^2 u_x + b u_xxx + c u u_xx + d u^4.
  static PdeId gen_mkdv_discovery();
  /// u_t + a u^2 u_x + b u_xxx + c u^4 + d u u_xx.
  static PdeId gen_mkdv_bte();
  static PdeId fixed(PdeTag tag);

  friend bool operator==(const PdeId&, const PdeId&) = default;
};

std::string_view to_string(PdeTag tag);
PdeTag pde_tag_from_string(std::string_view name);
std::string_view to_string(Monomial m);

/// Coefficient names a PDE reads from EquationParams.
std::vector<std::string> pde_coefficients(const PdeId& pde);
/// Jet indices a PDE reads.
std::vector<ad::MultiIndex> pde_indices(const PdeId& pde);

enum class MiuraKind { Complex, Real };

/// (re, im) residual. im is 0 unless the PDE is Kdv on a complex field.
std::pair<double, double> pde_residual(const PdeId& pde, const ad::ComplexJet& jet,
                                       const EquationParams& params);

/// (r_x, r_t) of the generalized auto-BT with coefficients a, b, c, d, h, f.
std::pair<double, double> abt_residual(const ad::Jet& u, const ad::Jet& up,
                                       const EquationParams& params);

/// (re, im) transform residual; im is 0 for the real kind.
std::pair<double, double> miura_residual(const ad::Jet& u, const ad::ComplexJet& v,
                                         const EquationParams& params, MiuraKind kind);

/// Second Darboux step applied to a one-soliton seed.
sol::SolutionSpec bt_explicit_image(const sol::SolutionSpec& u0, double lambda2,
                                    double alpha2);

}  // namespace btl::res
