#include "btl/residuals/residuals.hpp"

#include <array>

#include "btl/error.hpp"

namespace btl::res {

namespace {

using ad::MultiIndex;

constexpr MultiIndex kV{0, 0}, kX{1, 0}, kT{0, 1}, kXX{2, 0}, kXT{1, 1}, kXXX{3, 0};

void require_indices(const ad::Jet& jet, std::span<const MultiIndex> indices,
                     const char* what) {
  for (MultiIndex m : indices) {
    if (!jet.has(m)) {
      throw Error(std::string(what) + " jet lacks index " + ad::to_string(m));
    }
  }
}

std::vector<MultiIndex> monomial_indices(Monomial m) {
  switch (m) {
    case Monomial::U2Ux: return {kX};
    case Monomial::Uxxx: return {kXXX};
    case Monomial::UUxx: return {kXX};
    case Monomial::U4: return {};
  }
  return {};
}

}  // namespace

PdeId PdeId::gen_mkdv_discovery() {
  return {PdeTag::GenMkdv,
          {{"a", Monomial::U2Ux}, {"b", Monomial::Uxxx}, {"c", Monomial::UUxx},
           {"d", Monomial::U4}}};
}

PdeId PdeId::gen_mkdv_bte() {
  return {PdeTag::GenMkdv,
          {{"a", Monomial::U2Ux}, {"b", Monomial::Uxxx}, {"c", Monomial::U4},
           {"d", Monomial::UUxx}}};
}

PdeId PdeId::fixed(PdeTag tag) {
  if (tag == PdeTag::GenMkdv) throw Error("GenMkdv needs a term map");
  return {tag, {}};
}

std::string_view to_string(PdeTag tag) {
  switch (tag) {
    case PdeTag::SineGordon: return "sine-gordon";
    case PdeTag::GenSineGordon: return "gen-sine-gordon";
    case PdeTag::FocusingMkdv: return "focusing-mkdv";
    case PdeTag::DefocusingMkdv: return "defocusing-mkdv";
    case PdeTag::Kdv: return "kdv";
    case PdeTag::GenMkdv: return "gen-mkdv";
  }
  return "?";
}

PdeTag pde_tag_from_string(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(PdeTag::GenMkdv); ++i) {
    if (to_string(static_cast<PdeTag>(i)) == name) return static_cast<PdeTag>(i);
  }
  throw ConfigError("unknown equation '" + std::string(name) + "'");
}

std::string_view to_string(Monomial m) {
  switch (m) {
    case Monomial::U2Ux: return "u^2 u_x";
    case Monomial::Uxxx: return "u_xxx";
    case Monomial::UUxx: return "u u_xx";
    case Monomial::U4: return "u^4";
  }
  return "?";
}

std::vector<std::string> pde_coefficients(const PdeId& pde) {
  switch (pde.tag) {
    case PdeTag::GenSineGordon: return {"a", "b"};
    case PdeTag::GenMkdv: {
      std::vector<std::string> out;
      for (const Term& term : pde.terms) out.push_back(term.coefficient);
      return out;
    }
    default: return {};
  }
}

std::vector<MultiIndex> pde_indices(const PdeId& pde) {
  switch (pde.tag) {
    case PdeTag::SineGordon:
    case PdeTag::GenSineGordon: return {kV, kXT};
    case PdeTag::FocusingMkdv:
    case PdeTag::DefocusingMkdv:
    case PdeTag::Kdv: return {kV, kX, kT, kXXX};
    case PdeTag::GenMkdv: {
      std::vector<MultiIndex> out{kV, kT};
      for (const Term& term : pde.terms) {
        for (MultiIndex m : monomial_indices(term.monomial)) out.push_back(m);
      }
      return out;
    }
  }
  return {};
}

std::pair<double, double> pde_residual(const PdeId& pde, const ad::ComplexJet& jet,
                                       const EquationParams& params) {
  const auto indices = pde_indices(pde);
  require_indices(jet.re, indices, "pde_residual");
  const forms::JetView<double> u = forms::view(jet.re.raw());
  switch (pde.tag) {
    case PdeTag::SineGordon: return {forms::sine_gordon(u), 0.0};
    case PdeTag::GenSineGordon:
      return {forms::gen_sine_gordon(u, params.value("a"), params.value("b")), 0.0};
    case PdeTag::FocusingMkdv: return {forms::focusing_mkdv(u), 0.0};
    case PdeTag::DefocusingMkdv: return {forms::defocusing_mkdv(u), 0.0};
    case PdeTag::Kdv: {
      require_indices(jet.im, indices, "pde_residual");
      return forms::kdv_complex(u, forms::view(jet.im.raw()));
    }
    case PdeTag::GenMkdv: {
      double r = u.t;
      for (const Term& term : pde.terms) {
        r += params.value(term.coefficient) * forms::monomial(term.monomial, u);
      }
      return {r, 0.0};
    }
  }
  return {0.0, 0.0};
}

std::pair<double, double> abt_residual(const ad::Jet& u, const ad::Jet& up,
                                       const EquationParams& params) {
  static constexpr std::array<MultiIndex, 3> kNeeded{kV, kX, kT};
  require_indices(u, kNeeded, "abt_residual");
  require_indices(up, kNeeded, "abt_residual");
  return forms::abt(forms::view(u.raw()), forms::view(up.raw()), params.value("a"),
                    params.value("b"), params.value("c"), params.value("d"),
                    params.value("h"), params.value("f"));
}

std::pair<double, double> miura_residual(const ad::Jet& u, const ad::ComplexJet& v,
                                         const EquationParams& params, MiuraKind kind) {
  static constexpr std::array<MultiIndex, 3> kNeeded{kV, kX, kXX};
  require_indices(u, kNeeded, "miura_residual");
  const auto uv = forms::view(u.raw());
  const double a = params.value("a"), b = params.value("b"), c = params.value("c"),
               d = params.value("d");
  if (kind == MiuraKind::Complex) {
    return forms::miura_complex(uv, v.re.value(), v.im.value(), a, b, c, d);
  }
  return {forms::miura_real(uv, v.re.value(), a, b, c, d), 0.0};
}

sol::SolutionSpec bt_explicit_image(const sol::SolutionSpec& u0, double lambda2,
                                    double alpha2) {
  const auto* seed = std::get_if<sol::MkdvOneSolitonDT>(&u0);
  if (seed == nullptr) throw Error("explicit BT image needs a one-soliton seed");
  if (!(lambda2 > seed->lambda1)) throw DomainError("explicit BT image requires lambda2 > lambda1");
  sol::SolutionSpec out = sol::MkdvTwoSolitonDT{seed->lambda1, lambda2, seed->alpha1, alpha2};
  sol::validate(out);
  return out;
}

}  // namespace btl::res
