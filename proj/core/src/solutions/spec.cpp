#include "btl/solutions/spec.hpp"

#include <cmath>

#include "btl/error.hpp"

namespace btl::sol {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void require_finite(const SolutionSpec& spec) {
  for (const auto& [name, value] : parameters(spec)) {
    require(std::isfinite(value), "solution parameter " + name + " is not finite");
  }
}

}  // namespace

Family family_of(const SolutionSpec& spec) {
  return static_cast<Family>(spec.index());
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::SgBreather: return "sg-breather";
    case Family::MkdvBright: return "mkdv-bright";
    case Family::KdvComplexSoliton: return "kdv-complex-soliton";
    case Family::MkdvKink: return "mkdv-kink";
    case Family::KdvPedestalSoliton: return "kdv-pedestal-soliton";
    case Family::MkdvOneSolitonDT: return "mkdv-one-soliton-dt";
    case Family::MkdvTwoSolitonDT: return "mkdv-two-soliton-dt";
  }
  return "?";
}

Family family_from_string(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Family::MkdvTwoSolitonDT); ++i) {
    if (to_string(static_cast<Family>(i)) == name) return static_cast<Family>(i);
  }
  throw ConfigError("unknown solution family '" + std::string(name) + "'");
}

void validate(const SolutionSpec& spec) {
  require_finite(spec);
  std::visit(
      overloaded{
          [](const SgBreather& s) {
            require(s.k >= 0.0 && s.k < 1.0, "breather requires k in [0, 1)");
            require(s.mu != 0.0, "breather requires mu != 0");
            require(std::abs(std::cos(s.mu)) > 1e-12, "breather requires cos(mu) != 0");
          },
          [](const MkdvBright& s) { require(s.k != 0.0, "soliton requires k != 0"); },
          [](const KdvComplexSoliton& s) { require(s.k != 0.0, "soliton requires k != 0"); },
          [](const MkdvKink& s) { require(s.k != 0.0, "kink requires k != 0"); },
          [](const KdvPedestalSoliton& s) { require(s.k != 0.0, "soliton requires k != 0"); },
          [](const MkdvOneSolitonDT& s) {
            require(s.lambda1 != 0.0, "one-soliton requires lambda1 != 0");
          },
          [](const MkdvTwoSolitonDT& s) {
            require(s.lambda1 > 0.0 && s.lambda2 > s.lambda1,
                    "two-soliton requires lambda2 > lambda1 > 0");
          },
      },
      spec);
}

bool is_complex(const SolutionSpec& spec) {
  return std::holds_alternative<KdvComplexSoliton>(spec);
}

std::vector<std::pair<std::string, double>> parameters(const SolutionSpec& spec) {
  return std::visit(
      overloaded{
          [](const SgBreather& s) -> std::vector<std::pair<std::string, double>> {
            return {{"k", s.k}, {"mu", s.mu}, {"x0", s.x0}};
          },
          [](const MkdvBright& s) -> std::vector<std::pair<std::string, double>> {
            return {{"k", s.k}, {"x0", s.x0}};
          },
          [](const KdvComplexSoliton& s) -> std::vector<std::pair<std::string, double>> {
            return {{"k", s.k}, {"x0", s.x0}};
          },
          [](const MkdvKink& s) -> std::vector<std::pair<std::string, double>> {
            return {{"k", s.k}, {"x0", s.x0}, {"phase_rate", s.phase_rate}};
          },
          [](const KdvPedestalSoliton& s) -> std::vector<std::pair<std::string, double>> {
            return {{"k", s.k}, {"x0", s.x0}};
          },
          [](const MkdvOneSolitonDT& s) -> std::vector<std::pair<std::string, double>> {
            return {{"lambda1", s.lambda1}, {"alpha1", s.alpha1}};
          },
          [](const MkdvTwoSolitonDT& s) -> std::vector<std::pair<std::string, double>> {
            return {{"lambda1", s.lambda1},
                    {"lambda2", s.lambda2},
                    {"alpha1", s.alpha1},
                    {"alpha2", s.alpha2}};
          },
      },
      spec);
}

namespace {

SolutionSpec default_for(Family family) {
  switch (family) {
    case Family::SgBreather: return SgBreather{};
    case Family::MkdvBright: return MkdvBright{};
    case Family::KdvComplexSoliton: return KdvComplexSoliton{};
    case Family::MkdvKink: return MkdvKink{};
    case Family::KdvPedestalSoliton: return KdvPedestalSoliton{};
    case Family::MkdvOneSolitonDT: return MkdvOneSolitonDT{};
    case Family::MkdvTwoSolitonDT: return MkdvTwoSolitonDT{};
  }
  throw ConfigError("unknown solution family");
}

}  // namespace

SolutionSpec make_solution(Family family, const std::map<std::string, double>& params) {
  SolutionSpec spec = default_for(family);
  auto take = [&](const char* name, double& field) {
    if (auto it = params.find(name); it != params.end()) field = it->second;
  };
  std::visit(overloaded{
                 [&](SgBreather& s) { take("k", s.k); take("mu", s.mu); take("x0", s.x0); },
                 [&](MkdvBright& s) { take("k", s.k); take("x0", s.x0); },
                 [&](KdvComplexSoliton& s) { take("k", s.k); take("x0", s.x0); },
                 [&](MkdvKink& s) {
                   take("k", s.k);
                   take("x0", s.x0);
                   take("phase_rate", s.phase_rate);
                 },
                 [&](KdvPedestalSoliton& s) { take("k", s.k); take("x0", s.x0); },
                 [&](MkdvOneSolitonDT& s) {
                   take("lambda1", s.lambda1);
                   take("alpha1", s.alpha1);
                 },
                 [&](MkdvTwoSolitonDT& s) {
                   take("lambda1", s.lambda1);
                   take("lambda2", s.lambda2);
                   take("alpha1", s.alpha1);
                   take("alpha2", s.alpha2);
                 },
             },
             spec);
  const auto known = parameters(spec);
  for (const auto& [name, value] : params) {
    bool found = false;
    for (const auto& k : known) found = found || k.first == name;
    if (!found) {
      throw ConfigError("parameter '" + name + "' does not apply to " +
                        std::string(to_string(family)));
    }
  }
  validate(spec);
  return spec;
}

void Region::validate() const {
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(t_min) &&
        std::isfinite(t_max))) {
    throw ConfigError("region bounds must be finite");
  }
  if (!(x_min < x_max) || !(t_min < t_max)) {
    throw ConfigError("region requires x_min < x_max and t_min < t_max");
  }
}

}  // namespace btl::sol
