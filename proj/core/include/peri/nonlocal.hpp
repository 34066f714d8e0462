#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "peri/grid.hpp"
#include "peri/jet.hpp"

namespace peri {

/// Largest integer m with m < delta/h (strict, per the horizon truncation
/// rule |i-j| < delta/h). When delta/h lands exactly on an integer the bound
/// is exclusive, so e.g. delta = h gives 0.
int truncation_halfwidth(double delta, double h);

/// Kernel samples C(xi_m) at offsets xi_m = m*h for |m| <= halfwidth, where
/// halfwidth = truncation_halfwidth(delta, h). Only the m >= 0 half is stored;
/// evenness C(xi) = C(-xi) is structural.
class KernelVector {
public:
    KernelVector() = default;
    KernelVector(std::vector<double> half, double delta, double h);

    int halfwidth() const { return static_cast<int>(half_.size()) - 1; }
    double delta() const { return delta_; }
    double h() const { return h_; }
    double at(int m) const { return half_[static_cast<std::size_t>(m < 0 ? -m : m)]; }
    std::span<const double> half() const { return half_; }

    /// Composite trapezoidal weight on the truncated stencil: 1 inside,
    /// 1/2 at the stencil ends.
    double quad_weight(int m) const {
        const int a = m < 0 ? -m : m;
        return (a == halfwidth() && halfwidth() > 0) ? 0.5 : 1.0;
    }

    /// Quadrature mass sum_m w_m C(xi_m) h.
    double mass() const;

    double l1_norm() const;

private:
    std::vector<double> half_;
    double delta_ = 0.0;
    double h_ = 0.0;
};

namespace detail {
inline int wrap_index(int i, int n) {
    int r = i % n;
    return r < 0 ? r + n : r;
}
}  // namespace detail

/// Discretized nonlocal operator applied to one spatial row:
///   q[i] = sum_m w_m C(xi_m) (theta[i] - theta[i-m]) h,  |m| <= halfwidth,
/// which is the horizon-truncated quadrature of
/// int C(|x-y|) [theta(x) - theta(y)] dy. Accumulation runs over the window
/// j = i - m_max .. i + m_max in ascending j, one term at a time, so results
/// are reproducible bit for bit. Out-of-range samples wrap around
/// (periodic) or read as zero (zero_pad).
///
/// The kernel values are passed as the nonnegative-offset half [C(0), C(h),
/// ..., C(m_max h)] with scalar type S so the same code serves plain
/// evaluation (double) and training (Var).
template <class S>
void nonlocal_rhs_span(std::span<const S> row, std::span<const S> kernel_half, double h,
                       BoundaryRule boundary, std::span<S> out) {
    const int n = static_cast<int>(row.size());
    const int m_max = static_cast<int>(kernel_half.size()) - 1;
    for (int i = 0; i < n; ++i) {
        S acc = zero_like(row[0]);
        for (int j = i - m_max; j <= i + m_max; ++j) {
            const int m = i - j;
            const int a = m < 0 ? -m : m;
            const double wh = ((a == m_max && m_max > 0) ? 0.5 : 1.0) * h;
            if (boundary == BoundaryRule::periodic) {
                const S& other = row[static_cast<std::size_t>(detail::wrap_index(j, n))];
                acc = acc + scale(kernel_half[static_cast<std::size_t>(a)] * (row[static_cast<std::size_t>(i)] - other), wh);
            } else {
                if (j >= 0 && j < n) {
                    acc = acc + scale(kernel_half[static_cast<std::size_t>(a)] *
                                          (row[static_cast<std::size_t>(i)] - row[static_cast<std::size_t>(j)]),
                                      wh);
                } else {
                    acc = acc + scale(kernel_half[static_cast<std::size_t>(a)] * row[static_cast<std::size_t>(i)], wh);
                }
            }
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
}

/// Double-precision entry point over a sampled kernel.
std::vector<double> nonlocal_rhs(std::span<const double> theta_row, const KernelVector& kernel,
                                 double h, BoundaryRule boundary = BoundaryRule::periodic);

struct ResidualSample {
    double x = 0.0;
    double t = 0.0;
    double r = 0.0;
};

}  // namespace peri
