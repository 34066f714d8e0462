#pragma once

#include <span>
#include <vector>

#include "peri/net.hpp"
#include "peri/nonlocal.hpp"
#include "peri/spectral.hpp"

namespace peri {

struct GridPoint {
    int ix = 0;
    int it = 0;
};

/// PDE residual of the network at grid-aligned collocation points:
///   r(x, t) = dtt theta(x, t) - s * nonlocal_rhs(theta(., t))
/// where dtt theta comes from forward_theta with t seeded as a jet, and
/// s = +1 under the paper convention, -1 under the oscillatory one.
///
/// The kernel inside the operator comes from `fixed_kernel` when non-null,
/// otherwise from the model's C branch sampled on the offset stencil of
/// horizon `delta`. Non-finite residuals are reported with their point
/// rather than raised.
std::vector<ResidualSample> pde_residual(const IPinnModel& model, std::span<const GridPoint> points,
                                         const KernelVector* fixed_kernel, double delta,
                                         const Grid& grid, SignConvention sign,
                                         BoundaryRule boundary = BoundaryRule::periodic);

/// Parametric flavor: the kernel is gamma* exp(-sigma* xi^2) sampled on the
/// stencil of horizon `delta`.
std::vector<ResidualSample> pde_residual(const ParametricModel& model,
                                         std::span<const GridPoint> points, double delta,
                                         const Grid& grid, SignConvention sign,
                                         BoundaryRule boundary = BoundaryRule::periodic);

/// All (ix, it) pairs of the grid.
std::vector<GridPoint> full_collocation(const Grid& grid);

}  // namespace peri
