#include "peri/residual.hpp"

#include <algorithm>
#include <map>

namespace peri {

namespace {

template <class ThetaJetAt, class KernelHalfAt>
std::vector<ResidualSample> residual_impl(std::span<const GridPoint> points, const Grid& grid,
                                          SignConvention sign, BoundaryRule boundary,
                                          ThetaJetAt&& theta_jet_at, KernelHalfAt&& kernel_half_at,
                                          int m_max) {
    std::vector<double> kernel_half(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m)
        kernel_half[static_cast<std::size_t>(m)] = kernel_half_at(static_cast<double>(m) * grid.h());

    std::map<int, std::vector<std::size_t>> by_row;
    for (std::size_t p = 0; p < points.size(); ++p) {
        const GridPoint& gp = points[p];
        if (gp.ix < 0 || gp.ix >= grid.n_x || gp.it < 0 || gp.it >= grid.n_t)
            throw std::invalid_argument("pde_residual: collocation point off the grid");
        by_row[gp.it].push_back(p);
    }

    const double s = sign == SignConvention::paper ? 1.0 : -1.0;
    std::vector<ResidualSample> out(points.size());
    std::vector<double> values(static_cast<std::size_t>(grid.n_x));
    std::vector<double> dtt(static_cast<std::size_t>(grid.n_x));
    std::vector<double> q(static_cast<std::size_t>(grid.n_x));
    for (const auto& [it, idxs] : by_row) {
        const double t = grid.t(it);
        for (int ix = 0; ix < grid.n_x; ++ix) {
            const Jet2 th = theta_jet_at(grid.x(ix), t);
            values[static_cast<std::size_t>(ix)] = th.v;
            dtt[static_cast<std::size_t>(ix)] = th.d2;
        }
        nonlocal_rhs_span<double>(values, kernel_half, grid.h(), boundary, q);
        for (std::size_t p : idxs) {
            const GridPoint& gp = points[p];
            out[p] = ResidualSample{grid.x(gp.ix), t,
                                    dtt[static_cast<std::size_t>(gp.ix)] -
                                        s * q[static_cast<std::size_t>(gp.ix)]};
        }
    }
    return out;
}

}  // namespace

std::vector<ResidualSample> pde_residual(const IPinnModel& model, std::span<const GridPoint> points,
                                         const KernelVector* fixed_kernel, double delta,
                                         const Grid& grid, SignConvention sign,
                                         BoundaryRule boundary) {
    const int m_max = fixed_kernel ? fixed_kernel->halfwidth()
                                   : truncation_halfwidth(delta, grid.h());
    auto kernel_at = [&](double xi) {
        return fixed_kernel ? fixed_kernel->at(static_cast<int>(std::lround(xi / grid.h())))
                            : model.forward_c(xi);
    };
    auto theta_at = [&](double x, double t) { return model.forward_theta(x, jet_seed(t)); };
    return residual_impl(points, grid, sign, boundary, theta_at, kernel_at, m_max);
}

std::vector<ResidualSample> pde_residual(const ParametricModel& model,
                                         std::span<const GridPoint> points, double delta,
                                         const Grid& grid, SignConvention sign,
                                         BoundaryRule boundary) {
    const int m_max = truncation_halfwidth(delta, grid.h());
    auto kernel_at = [&](double xi) { return model.kernel_at(xi); };
    auto theta_at = [&](double x, double t) { return model.forward_theta(x, jet_seed(t)); };
    return residual_impl(points, grid, sign, boundary, theta_at, kernel_at, m_max);
}

std::vector<GridPoint> full_collocation(const Grid& grid) {
    std::vector<GridPoint> pts;
    pts.reserve(static_cast<std::size_t>(grid.n_x) * grid.n_t);
    for (int it = 0; it < grid.n_t; ++it)
        for (int ix = 0; ix < grid.n_x; ++ix) pts.push_back(GridPoint{ix, it});
    return pts;
}

}  // namespace peri
