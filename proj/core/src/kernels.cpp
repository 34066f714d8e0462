#include "peri/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace peri {

void KernelSpec::validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("kernel: delta must be positive");
    switch (kind) {
        case KernelKind::v_shape:
            if (slope < 0.0) throw std::invalid_argument("kernel: v_shape slope must be nonnegative");
            break;
        case KernelKind::boundary_v:
            if (delta > 10.0) throw std::invalid_argument("kernel: boundary_v delta must not exceed 10");
            break;
        case KernelKind::gaussian:
            if (amplitude < 0.0 || width <= 0.0)
                throw std::invalid_argument("kernel: gaussian needs amplitude >= 0 and width > 0");
            break;
        case KernelKind::parametric_gaussian:
            if (gamma_star < 0.0 || sigma_star <= 0.0)
                throw std::invalid_argument("kernel: parametric_gaussian needs gamma* >= 0 and sigma* > 0");
            break;
    }
}

double eval_kernel(const KernelSpec& spec, double x) {
    const double a = std::fabs(x);
    switch (spec.kind) {
        case KernelKind::v_shape:
            return a <= spec.delta ? spec.slope * a : 0.0;
        case KernelKind::boundary_v: {
            // Verbatim piecewise form on [-10, 10]. The two nonzero branches
            // sit against the domain edges; the middle of the domain is zero.
            if (a > 10.0) return 0.0;
            const double d = spec.delta;
            if (x <= -10.0 + d) return (d - x - 10.0) / d;
            if (x > 10.0 - d) return (d + x - 10.0) / d;
            return 0.0;
        }
        case KernelKind::gaussian:
            return spec.amplitude * std::exp(-spec.width * x * x);
        case KernelKind::parametric_gaussian:
            return spec.gamma_star * std::exp(-spec.sigma_star * x * x);
    }
    return 0.0;
}

double sampling_horizon(const KernelSpec& spec) {
    return spec.kind == KernelKind::boundary_v ? 10.0 : spec.delta;
}

KernelVector sample_kernel(const KernelSpec& spec, double h) {
    spec.validate();
    if (!(h > 0.0)) throw std::invalid_argument("sample_kernel: h must be positive");
    const double horizon = sampling_horizon(spec);
    const int m_max = truncation_halfwidth(horizon, h);
    std::vector<double> half(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) half[static_cast<std::size_t>(m)] = eval_kernel(spec, m * h);
    return KernelVector(std::move(half), horizon, h);
}

std::string to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::v_shape: return "v_shape";
        case KernelKind::boundary_v: return "boundary_v";
        case KernelKind::gaussian: return "gaussian";
        case KernelKind::parametric_gaussian: return "parametric_gaussian";
    }
    return "?";
}

KernelKind kernel_kind_from_string(const std::string& name) {
    if (name == "v_shape") return KernelKind::v_shape;
    if (name == "boundary_v") return KernelKind::boundary_v;
    if (name == "gaussian") return KernelKind::gaussian;
    if (name == "parametric_gaussian") return KernelKind::parametric_gaussian;
    throw std::invalid_argument("unknown kernel kind: " + name);
}

}  // namespace peri
