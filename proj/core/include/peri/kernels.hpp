#pragma once

#include <string>

#include "peri/nonlocal.hpp"

namespace peri {

enum class KernelKind { v_shape, boundary_v, gaussian, parametric_gaussian };

/// Closed-form reference kernels.
///
///  v_shape:             C(x) = slope * |x| on [-delta, delta], 0 outside
///  boundary_v:          piecewise linear on the fixed domain [-10, 10],
///                       supported near the domain edges; `delta` is the
///                       shape parameter of the branches at +-(10 - delta)
///  gaussian:            C(x) = amplitude * exp(-width * x^2)
///  parametric_gaussian: C(x) = gamma_star * exp(-sigma_star * x^2)
struct KernelSpec {
    KernelKind kind = KernelKind::v_shape;
    double delta = 10.0;
    double slope = 0.6;
    double amplitude = 2.2567583341910251;  // 4/sqrt(pi)
    double width = 1.0;
    double gamma_star = 2.2567583341910251;
    double sigma_star = 1.0;

    void validate() const;
};

double eval_kernel(const KernelSpec& spec, double x);

/// Half-width of the offset stencil used when sampling `spec` with step h.
/// boundary_v lives on the fixed domain [-10, 10] and is supported near its
/// edges, so its stencil spans the whole domain instead of [-delta, delta].
double sampling_horizon(const KernelSpec& spec);

/// Samples the closed form onto the discrete offset stencil. Evenness is
/// exact because only |xi| is ever evaluated.
KernelVector sample_kernel(const KernelSpec& spec, double h);

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

}  // namespace peri
