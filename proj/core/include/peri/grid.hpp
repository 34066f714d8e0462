#pragma once

#include <stdexcept>
#include <string>

namespace peri {

/// Uniform space-time grid. Spatial nodes are x_i = x_min + i*h with
/// h = (x_max - x_min)/(n_x - 1); time nodes likewise.
struct Grid {
    double x_min = -10.0;
    double x_max = 10.0;
    int n_x = 101;
    double t_min = 0.0;
    double t_max = 20.0;
    int n_t = 101;

    double h() const { return (x_max - x_min) / static_cast<double>(n_x - 1); }
    double dt() const { return n_t > 1 ? (t_max - t_min) / static_cast<double>(n_t - 1) : 0.0; }
    double x(int i) const { return x_min + static_cast<double>(i) * h(); }
    double t(int j) const { return t_min + static_cast<double>(j) * dt(); }

    void validate() const {
        if (n_x < 2) throw std::invalid_argument("grid: n_x must be at least 2");
        if (n_t < 1) throw std::invalid_argument("grid: n_t must be at least 1");
        if (!(x_max > x_min)) throw std::invalid_argument("grid: x_max must exceed x_min");
        if (n_t > 1 && !(t_max > t_min)) throw std::invalid_argument("grid: t_max must exceed t_min");
    }

    bool same_as(const Grid& o) const {
        return x_min == o.x_min && x_max == o.x_max && n_x == o.n_x && t_min == o.t_min &&
               t_max == o.t_max && n_t == o.n_t;
    }
};

/// Sign of the nonlocal term in the evolution equation. `paper` keeps the
/// operator exactly as printed, which grows exponentially in time;
/// `oscillatory` flips it so that the dispersive wave behavior holds and is
/// the default for data generation.
enum class SignConvention { paper, oscillatory };

/// How the convolution treats displacement samples outside the grid.
enum class BoundaryRule { periodic, zero_pad };

inline std::string to_string(SignConvention s) {
    return s == SignConvention::paper ? "paper" : "oscillatory";
}
inline std::string to_string(BoundaryRule b) {
    return b == BoundaryRule::periodic ? "periodic" : "zero_pad";
}

inline SignConvention sign_from_string(const std::string& s) {
    if (s == "paper") return SignConvention::paper;
    if (s == "oscillatory") return SignConvention::oscillatory;
    throw std::invalid_argument("unknown sign convention: " + s);
}
inline BoundaryRule boundary_from_string(const std::string& s) {
    if (s == "periodic") return BoundaryRule::periodic;
    if (s == "zero_pad") return BoundaryRule::zero_pad;
    throw std::invalid_argument("unknown boundary rule: " + s);
}

}  // namespace peri
