#include "btl/solutions/verify.hpp"

#include <algorithm>
#include <cmath>

#include "btl/error.hpp"
#include "btl/solutions/closed_form.hpp"

namespace btl::sol {

double max_residual(const SolutionSpec& spec, const res::PdeId& pde, const Region& region,
                    int resolution) {
  region.validate();
  if (resolution < 2) throw Error("grid resolution must be at least 2");
  const SolutionField field(spec);
  ad::Workspace ws(field.graph());
  const res::EquationParams none;
  double worst = 0.0;
  const double n = resolution - 1;
  for (int i = 0; i < resolution; ++i) {
    const double x = region.x_min + (region.x_max - region.x_min) * i / n;
    for (int j = 0; j < resolution; ++j) {
      const double t = region.t_min + (region.t_max - region.t_min) * j / n;
      const auto [re, im] = field.jets({x, t}, ws);
      const auto [r0, r1] =
          res::pde_residual(pde, {ad::Jet::full(re), ad::Jet::full(im)}, none);
      worst = std::max({worst, std::abs(r0), std::abs(r1)});
    }
  }
  return worst;
}

res::PdeId paired_pde(Family family) {
  switch (family) {
    case Family::SgBreather: return res::PdeId::fixed(res::PdeTag::SineGordon);
    case Family::MkdvKink: return res::PdeId::fixed(res::PdeTag::DefocusingMkdv);
    case Family::KdvComplexSoliton:
    case Family::KdvPedestalSoliton: return res::PdeId::fixed(res::PdeTag::Kdv);
    case Family::MkdvBright:
    case Family::MkdvOneSolitonDT:
    case Family::MkdvTwoSolitonDT: return res::PdeId::fixed(res::PdeTag::FocusingMkdv);
  }
  throw Error("unknown family");
}

}  // namespace btl::sol
