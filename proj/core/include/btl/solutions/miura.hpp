#pragma once

#include "btl/autodiff/jet.hpp"

namespace btl::sol {

enum class MiuraImage { Complex, Real };

/// Value of v = i u_x + u^2 (complex) or v = u_x - u^2 (real). Only the
/// (0,0) entries of the result are meaningful.
ad::ComplexJet miura_image(const ad::Jet& u, MiuraImage kind);

}  // namespace btl::sol
