#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace peri {

class Tape;

/// Handle to a scalar node on a reverse-mode tape. Cheap to copy; carries the
/// forward value so arithmetic never has to look it up again.
class Var {
public:
    Var() = default;
    Var(Tape* tape, std::int32_t id, double value) : tape_(tape), id_(id), val_(value) {}

    double value() const { return val_; }
    std::int32_t id() const { return id_; }
    Tape* tape() const { return tape_; }

private:
    Tape* tape_ = nullptr;
    std::int32_t id_ = -1;
    double val_ = 0.0;
};

/// Append-only computation graph for reverse-mode differentiation over scalars.
///
/// Nodes store parent indices and the local partial derivatives recorded during
/// the forward sweep; a backward sweep visits every node exactly once, in
/// reverse creation order, so its cost is linear in the tape length. Nodes 0
/// and 1 are the folded constants 0 and 1: arithmetic on them short-circuits
/// instead of growing the tape.
///
/// A tape is a single-writer object. Independent evaluations may run on
/// independent tapes in parallel; gradient vectors are then reduced by
/// summation.
class Tape {
public:
    Tape() { reset(); }
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Drops all nodes except the 0/1 constants; capacity is retained so a
    /// tape can be reused across batches without reallocating.
    void reset() {
        nodes_.clear();
        nodes_.push_back(Node{-1, -1, 0.0, 0.0});
        nodes_.push_back(Node{-1, -1, 0.0, 0.0});
    }

    std::size_t size() const { return nodes_.size(); }

    void reserve(std::size_t n) { nodes_.reserve(n); }

    /// Registers an independent input (trainable parameter or external value).
    Var leaf(double value) {
        nodes_.push_back(Node{-1, -1, 0.0, 0.0});
        return Var(this, static_cast<std::int32_t>(nodes_.size() - 1), value);
    }

    /// A constant participates in arithmetic but never receives a gradient.
    Var constant(double value) {
        if (value == 0.0) return zero();
        if (value == 1.0) return one();
        return leaf(value);
    }

    Var zero() { return Var(this, 0, 0.0); }
    Var one() { return Var(this, 1, 1.0); }

    Var emit1(double value, std::int32_t p, double w) {
        assert(p >= 0 && p < static_cast<std::int32_t>(nodes_.size()));
        nodes_.push_back(Node{p, -1, w, 0.0});
        return Var(this, static_cast<std::int32_t>(nodes_.size() - 1), value);
    }

    Var emit2(double value, std::int32_t p0, double w0, std::int32_t p1, double w1) {
        assert(p0 >= 0 && p1 >= 0);
        assert(p0 < static_cast<std::int32_t>(nodes_.size()) && p1 < static_cast<std::int32_t>(nodes_.size()));
        nodes_.push_back(Node{p0, p1, w0, w1});
        return Var(this, static_cast<std::int32_t>(nodes_.size() - 1), value);
    }

    /// Propagates adjoints top-down. `adj` must have size() entries and be
    /// pre-seeded by the caller (multiple seeds are fine).
    void backward(std::span<double> adj) const;

    /// Adjoints of every node with respect to `loss`. Throws if the loss value
    /// is not finite.
    std::vector<double> gradient(const Var& loss) const;

    /// Number of nodes visited by the most recent backward sweep.
    std::size_t last_backward_visits() const { return last_visits_; }

private:
    struct Node {
        std::int32_t p0, p1;
        double w0, w1;
    };
    std::vector<Node> nodes_;
    mutable std::size_t last_visits_ = 0;
};

namespace detail {
inline bool is_const_zero(const Var& v) { return v.id() == 0; }
inline bool is_const_one(const Var& v) { return v.id() == 1; }
}  // namespace detail

// ---------------------------------------------------------------------------
// Var arithmetic. Zero/one operands fold away so that structurally-constant
// jet components cost nothing.
// ---------------------------------------------------------------------------

inline Var operator+(const Var& a, const Var& b) {
    assert(a.tape() == b.tape());
    if (detail::is_const_zero(a)) return b;
    if (detail::is_const_zero(b)) return a;
    return a.tape()->emit2(a.value() + b.value(), a.id(), 1.0, b.id(), 1.0);
}

inline Var operator-(const Var& a) {
    if (detail::is_const_zero(a)) return a;
    return a.tape()->emit1(-a.value(), a.id(), -1.0);
}

inline Var operator-(const Var& a, const Var& b) {
    assert(a.tape() == b.tape());
    if (detail::is_const_zero(b)) return a;
    if (detail::is_const_zero(a)) return -b;
    return a.tape()->emit2(a.value() - b.value(), a.id(), 1.0, b.id(), -1.0);
}

inline Var operator*(const Var& a, const Var& b) {
    assert(a.tape() == b.tape());
    if (detail::is_const_zero(a)) return a;
    if (detail::is_const_zero(b)) return b;
    if (detail::is_const_one(a)) return b;
    if (detail::is_const_one(b)) return a;
    return a.tape()->emit2(a.value() * b.value(), a.id(), b.value(), b.id(), a.value());
}

inline Var operator/(const Var& a, const Var& b) {
    assert(a.tape() == b.tape());
    if (b.value() == 0.0) throw std::domain_error("Var division by zero");
    if (detail::is_const_zero(a)) return a;
    if (detail::is_const_one(b)) return a;
    const double q = a.value() / b.value();
    return a.tape()->emit2(q, a.id(), 1.0 / b.value(), b.id(), -q / b.value());
}

inline Var operator+(const Var& a, double c) {
    if (c == 0.0) return a;
    if (detail::is_const_zero(a)) return a.tape()->constant(c);
    return a.tape()->emit1(a.value() + c, a.id(), 1.0);
}
inline Var operator+(double c, const Var& a) { return a + c; }

inline Var operator-(const Var& a, double c) { return a + (-c); }
inline Var operator-(double c, const Var& a) {
    if (detail::is_const_zero(a)) return a.tape()->constant(c);
    return a.tape()->emit1(c - a.value(), a.id(), -1.0);
}

inline Var operator*(const Var& a, double c) {
    if (detail::is_const_zero(a)) return a;
    if (c == 0.0) return a.tape()->zero();
    if (c == 1.0) return a;
    return a.tape()->emit1(a.value() * c, a.id(), c);
}
inline Var operator*(double c, const Var& a) { return a * c; }

inline Var operator/(const Var& a, double c) {
    if (c == 0.0) throw std::domain_error("Var division by zero");
    if (detail::is_const_zero(a)) return a;
    return a.tape()->emit1(a.value() / c, a.id(), 1.0 / c);
}
inline Var operator/(double c, const Var& b) {
    if (b.value() == 0.0) throw std::domain_error("Var division by zero");
    const double q = c / b.value();
    return b.tape()->emit1(q, b.id(), -q / b.value());
}

inline Var exp(const Var& a) {
    const double e = std::exp(a.value());
    return a.tape()->emit1(e, a.id(), e);
}

inline Var sqrt(const Var& a) {
    if (a.value() < 0.0) throw std::domain_error("Var sqrt of negative value");
    const double s = std::sqrt(a.value());
    return a.tape()->emit1(s, a.id(), 0.5 / s);
}

inline Var square(const Var& a) {
    if (detail::is_const_zero(a)) return a;
    return a.tape()->emit1(a.value() * a.value(), a.id(), 2.0 * a.value());
}

/// Subgradient at 0 is 0, consistently with the jet-mode definition.
inline Var relu(const Var& a) {
    if (a.value() > 0.0) return a;
    return a.tape()->zero();
}

inline Var sigmoid(const Var& a) {
    const double v = a.value();
    double s;
    if (v >= 0.0) {
        s = 1.0 / (1.0 + std::exp(-v));
    } else {
        const double e = std::exp(v);
        s = e / (1.0 + e);
    }
    return a.tape()->emit1(s, a.id(), s * (1.0 - s));
}

/// |a| with subgradient 0 at a == 0.
inline Var vabs(const Var& a) {
    if (a.value() > 0.0) return a;
    if (a.value() < 0.0) return -a;
    return a.tape()->zero();
}

/// max(a, b); ties propagate the gradient to `a`.
inline Var vmax(const Var& a, const Var& b) {
    return a.value() >= b.value() ? a : b;
}

// Plain-double twins so templated code can call the same names for any scalar.
inline double exp(double a) { return std::exp(a); }
inline double sqrt(double a) {
    if (a < 0.0) throw std::domain_error("sqrt of negative value");
    return std::sqrt(a);
}
inline double square(double a) { return a * a; }
inline double relu(double a) { return a > 0.0 ? a : 0.0; }
inline double sigmoid(double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
}
inline double vabs(double a) { return std::fabs(a); }
inline double vmax(double a, double b) { return a >= b ? a : b; }

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Var& x) { return x.value(); }

/// Gradient of a scalar loss with respect to a list of registered parameters.
/// Parameters the graph never reaches get 0. Throws if the loss is non-finite.
std::vector<double> grad(const Var& loss, std::span<const Var> params);

/// Maximum over parameters of
///   |central difference - tape gradient| / (|tape gradient| + eps).
/// `f` must be callable both as f(span<const Var>) -> Var and
/// f(span<const double>) -> double, evaluating the same expression.
template <class F>
double finite_diff_check(F&& f, std::span<const double> params, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("finite_diff_check: eps must be positive");

    Tape tape;
    std::vector<Var> vars;
    vars.reserve(params.size());
    for (double p : params) vars.push_back(tape.leaf(p));
    const Var loss = f(std::span<const Var>(vars));
    const std::vector<double> g = grad(loss, vars);

    std::vector<double> work(params.begin(), params.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < work.size(); ++i) {
        const double saved = work[i];
        work[i] = saved + eps;
        const double up = f(std::span<const double>(work));
        work[i] = saved - eps;
        const double down = f(std::span<const double>(work));
        work[i] = saved;
        if (!std::isfinite(up) || !std::isfinite(down))
            throw std::runtime_error("finite_diff_check: non-finite evaluation");
        const double central = (up - down) / (2.0 * eps);
        const double rel = std::abs(central - g[i]) / (std::abs(g[i]) + eps);
        if (rel > worst) worst = rel;
    }
    return worst;
}

}  // namespace peri
