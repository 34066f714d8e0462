#include "peri/nonlocal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace peri {

int truncation_halfwidth(double delta, double h) {
    if (!(delta > 0.0)) throw std::invalid_argument("truncation_halfwidth: delta must be positive");
    if (!(h > 0.0)) throw std::invalid_argument("truncation_halfwidth: h must be positive");
    const double q = delta / h;
    if (!(q < static_cast<double>(std::numeric_limits<int>::max())))
        throw std::overflow_error("truncation_halfwidth: delta/h overflows the index range");
    double m = std::floor(q);
    if (m == q) m -= 1.0;  // strict |i-j| < delta/h
    return m < 0.0 ? 0 : static_cast<int>(m);
}

KernelVector::KernelVector(std::vector<double> half, double delta, double h)
    : half_(std::move(half)), delta_(delta), h_(h) {
    if (half_.empty()) throw std::invalid_argument("KernelVector: needs at least the m = 0 sample");
    if (!(h_ > 0.0)) throw std::invalid_argument("KernelVector: h must be positive");
}

double KernelVector::mass() const {
    const int m_max = halfwidth();
    double acc = 0.0;
    for (int m = -m_max; m <= m_max; ++m) acc += quad_weight(m) * at(m) * h_;
    return acc;
}

double KernelVector::l1_norm() const {
    const int m_max = halfwidth();
    double acc = 0.0;
    for (int m = -m_max; m <= m_max; ++m) acc += std::fabs(at(m)) * quad_weight(m) * h_;
    return acc;
}

std::vector<double> nonlocal_rhs(std::span<const double> theta_row, const KernelVector& kernel,
                                 double h, BoundaryRule boundary) {
    if (theta_row.empty()) return {};
    if (h != kernel.h())
        throw std::invalid_argument("nonlocal_rhs: step size does not match the kernel sampling");
    std::vector<double> out(theta_row.size());
    nonlocal_rhs_span<double>(theta_row, kernel.half(), h, boundary, out);
    return out;
}

}  // namespace peri
