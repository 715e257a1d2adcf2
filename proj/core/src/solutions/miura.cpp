#include "btl/solutions/miura.hpp"

#include "btl/error.hpp"

namespace btl::sol {

ad::ComplexJet miura_image(const ad::Jet& u, MiuraImage kind) {
  constexpr ad::MultiIndex kX{1, 0};
  const double v = u.value();
  const double ux = u.at(kX);
  ad::ComplexJet out;
  if (kind == MiuraImage::Complex) {
    out.re.set({0, 0}, v * v);
    out.im.set({0, 0}, ux);
  } else {
    out.re.set({0, 0}, ux - v * v);
    out.im.set({0, 0}, 0.0);
  }
  return out;
}

}  // namespace btl::sol
