#pragma once

#include "btl/residuals/residuals.hpp"
#include "btl/solutions/spec.hpp"

namespace btl::sol {

/// Maximum |PDE residual| (both components) of the exact closed form over a
/// uniform resolution x resolution grid including the region's corners.
double max_residual(const SolutionSpec& spec, const res::PdeId& pde, const Region& region,
                    int resolution = 101);

/// The equation each family solves.
res::PdeId paired_pde(Family family);

}  // namespace btl::sol
