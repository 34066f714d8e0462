#pragma once

#include <stdexcept>

#include "peri/tape.hpp"

namespace peri {

/// Order-2 truncated Taylor number: value plus first and second derivative
/// with respect to one designated input. Arithmetic propagates the exact
/// order-2 rules, e.g. (f*g).d2 = f.d2*g.v + 2*f.d1*g.d1 + f.v*g.d2.
///
/// The base scalar S is double for plain evaluation or Var when the jet
/// components must themselves be differentiable with respect to trainable
/// parameters (the tape then runs over the jet components).
template <class S>
struct Jet2T {
    S v;
    S d1;
    S d2;
};

using Jet2 = Jet2T<double>;

inline double zero_like(double) { return 0.0; }
inline Var zero_like(const Var& v) { return v.tape()->zero(); }

/// Lifts a scalar constant: d1 = d2 = 0.
template <class S>
Jet2T<S> jet_const(const S& v) {
    S z = zero_like(v);
    return {v, z, z};
}

/// Seeds the differentiation variable: d1 = 1, d2 = 0.
inline Jet2 jet_seed(double v) { return {v, 1.0, 0.0}; }
inline Jet2T<Var> jet_seed(const Var& v) { return {v, v.tape()->one(), v.tape()->zero()}; }

template <class S>
Jet2T<S> operator+(const Jet2T<S>& a, const Jet2T<S>& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

template <class S>
Jet2T<S> operator-(const Jet2T<S>& a, const Jet2T<S>& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

template <class S>
Jet2T<S> operator-(const Jet2T<S>& a) {
    return {-a.v, -a.d1, -a.d2};
}

template <class S>
Jet2T<S> operator*(const Jet2T<S>& a, const Jet2T<S>& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * (a.d1 * b.d1) + a.v * b.d2};
}

template <class S>
Jet2T<S> operator/(const Jet2T<S>& a, const Jet2T<S>& b) {
    if (scalar_value(b.v) == 0.0) throw std::domain_error("jet division by zero");
    S q = a.v / b.v;
    S d1 = (a.d1 - q * b.d1) / b.v;
    S d2 = (a.d2 - 2.0 * (d1 * b.d1) - q * b.d2) / b.v;
    return {q, d1, d2};
}

// Mixed scalar/jet forms. A bare S is constant with respect to the seeded
// input, so these are the folded versions of jet_const(s) op jet.

template <class S>
Jet2T<S> mul_p(const S& c, const Jet2T<S>& x) {
    return {c * x.v, c * x.d1, c * x.d2};
}
inline double mul_p(double c, double x) { return c * x; }
inline Var mul_p(const Var& c, const Var& x) { return c * x; }

template <class S>
Jet2T<S> sub_p(const Jet2T<S>& x, const S& c) {
    return {x.v - c, x.d1, x.d2};
}
inline double sub_p(double x, double c) { return x - c; }
inline Var sub_p(const Var& x, const Var& c) { return x - c; }

template <class S>
Jet2T<S> add_const(Jet2T<S> x, double c) {
    x.v = x.v + c;
    return x;
}
inline double add_const(double x, double c) { return x + c; }
inline Var add_const(const Var& x, double c) { return x + c; }

template <class S>
Jet2T<S> scale(const Jet2T<S>& x, double c) {
    return {x.v * c, x.d1 * c, x.d2 * c};
}
inline double scale(double x, double c) { return x * c; }
inline Var scale(const Var& x, double c) { return x * c; }

// c / x with a scalar numerator.
template <class S>
Jet2T<S> div_ps(const S& c, const Jet2T<S>& x) {
    return jet_const(c) / x;
}
inline double div_ps(double c, double x) {
    if (x == 0.0) throw std::domain_error("division by zero");
    return c / x;
}
inline Var div_ps(const Var& c, const Var& x) { return c / x; }

template <class S>
Jet2T<S> exp(const Jet2T<S>& x) {
    S e = exp(x.v);
    return {e, e * x.d1, e * (x.d2 + x.d1 * x.d1)};
}

template <class S>
Jet2T<S> sqrt(const Jet2T<S>& x) {
    if (scalar_value(x.v) < 0.0) throw std::domain_error("jet sqrt of negative value");
    S s = sqrt(x.v);
    S inv2s = 0.5 / s;
    S d1 = x.d1 * inv2s;
    S d2 = x.d2 * inv2s - (d1 * d1) / s;
    return {s, d1, d2};
}

template <class S>
Jet2T<S> square(const Jet2T<S>& x) {
    return {x.v * x.v, 2.0 * (x.v * x.d1), 2.0 * (x.d1 * x.d1) + 2.0 * (x.v * x.d2)};
}

/// Pass-through for positive values, hard zero otherwise; the derivative at
/// exactly 0 is defined as 0.
template <class S>
Jet2T<S> relu(const Jet2T<S>& x) {
    if (scalar_value(x.v) > 0.0) return x;
    S z = zero_like(x.v);
    return {z, z, z};
}

template <class S>
Jet2T<S> sigmoid(const Jet2T<S>& x) {
    S s = sigmoid(x.v);
    S sp = s * (1.0 - s);          // sigma'
    S spp = sp * (1.0 - 2.0 * s);  // sigma''
    return {s, sp * x.d1, spp * (x.d1 * x.d1) + sp * x.d2};
}

template <class S>
Jet2T<S> vabs(const Jet2T<S>& x) {
    const double v = scalar_value(x.v);
    if (v > 0.0) return x;
    if (v < 0.0) return -x;
    S z = zero_like(x.v);
    return {z, z, z};
}

/// Identifiers for the elementary functions the jet propagates.
enum class ElemFn { add, mul, div, neg, sqrt, exp, relu, sigmoid, square };

/// Order-2 Taylor propagation of a unary elementary function.
Jet2 jet_apply(ElemFn f, const Jet2& x);
/// Binary flavor for add / mul / div.
Jet2 jet_apply(ElemFn f, const Jet2& x, const Jet2& y);

}  // namespace peri
