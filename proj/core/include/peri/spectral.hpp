#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "peri/grid.hpp"
#include "peri/kernels.hpp"
#include "peri/nonlocal.hpp"

namespace peri {

/// Per-wave-number squared frequency of the discrete operator,
///   omega(k)^2 = sum_m w_m C(xi_m) (1 - cos(k xi_m)) h,
/// on the periodic grid of n_x nodes (period n_x * h). omega(0)^2 = 0; for a
/// nonnegative kernel every other mode is positive. Modes with negative
/// omega^2 are flagged as a diagnostic, not an error.
struct DispersionTable {
    std::vector<double> k;       // signed wave numbers in DFT index order
    std::vector<double> omega2;  // omega(k)^2
    std::vector<int> negative_modes;

    bool all_nonneg() const { return negative_modes.empty(); }
};

DispersionTable dispersion(const KernelVector& kernel, const Grid& grid);

/// Plain O(n^2) discrete Fourier transform; at the grid sizes used here an
/// FFT would be an optimization, not a requirement.
std::vector<std::complex<double>> dft(std::span<const double> x);
std::vector<double> idft_real(std::span<const std::complex<double>> c);

struct DatasetMeta {
    KernelSpec kernel;
    SignConvention sign = SignConvention::oscillatory;
    BoundaryRule boundary = BoundaryRule::periodic;
    std::uint64_t seed = 0;
    std::string ic_kind = "gaussian_pulse";  // gaussian_pulse | cosine_mode | custom
    double ic_amplitude = 1.0;
    double ic_width = 1.0;  // gaussian_pulse: theta0 = amplitude * exp(-width x^2)
    int ic_mode = 1;        // cosine_mode: theta0 = amplitude * cos(k_mode x)
    std::vector<double> v0;  // initial velocity samples (needed by mode_energy)
};

/// Uniform space-time grid of displacement samples theta(x_i, t_j) plus the
/// metadata needed to reproduce and audit it.
struct FieldDataset {
    Grid grid;
    std::vector<double> theta;  // n_t rows of n_x values, time-major
    DatasetMeta meta;

    double at(int it, int ix) const {
        return theta[static_cast<std::size_t>(it) * grid.n_x + static_cast<std::size_t>(ix)];
    }
    std::span<const double> row(int it) const {
        return std::span<const double>(theta).subspan(static_cast<std::size_t>(it) * grid.n_x,
                                                      static_cast<std::size_t>(grid.n_x));
    }
};

/// theta0 samples for a named initial condition on the grid.
std::vector<double> initial_condition(const DatasetMeta& meta, const Grid& grid);

/// Solves the initial-value problem mode by mode. Under the oscillatory
/// convention each Fourier coefficient evolves as
///   theta_hat(k, t) = theta0_hat cos(w t) + v0_hat sin(w t)/w
/// (limit t at w = 0); the paper convention uses the cosh/sinh analogues and
/// errors out if the growth would overflow.
FieldDataset solve_forward(const KernelVector& kernel, std::span<const double> theta0,
                           std::span<const double> v0, const Grid& grid, SignConvention sign);

/// Conserved quadratic form sum_k omega^2 |theta_hat(k,t)|^2 +
/// |d_t theta_hat(k,t)|^2, with the time derivative from the analytic
/// per-mode solution. Requires an oscillatory dataset; `t` must be a grid
/// time.
double mode_energy(const FieldDataset& dataset, const DispersionTable& table, double t);

/// Residual of the dataset itself: second time difference against the
/// discrete nonlocal operator, at interior time rows.
std::vector<ResidualSample> dataset_residual(const FieldDataset& dataset, const KernelVector& kernel,
                                             SignConvention sign,
                                             BoundaryRule boundary = BoundaryRule::periodic);

/// Plain-text dataset file: JSON metadata header plus a columnar payload
/// `x t theta` with 17-significant-digit decimals; round trips bit for bit.
void save_dataset(const FieldDataset& dataset, const std::string& path);
FieldDataset load_dataset(const std::string& path);

}  // namespace peri
