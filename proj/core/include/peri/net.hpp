#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "peri/jet.hpp"

namespace peri {

enum class Activation { relu, sigmoid, identity };
enum class RbfFamily { inverse_quadratic, multiquadric };

std::string to_string(Activation a);
std::string to_string(RbfFamily f);
Activation activation_from_string(const std::string& s);
RbfFamily rbf_family_from_string(const std::string& s);

/// Scalar radial unit sigma_rbf(x) with parameters (rho, mu, gamma):
///   inverse_quadratic: rho / (1 + gamma (x - mu)^2)
///   multiquadric:      rho * sqrt(1 + gamma (x - mu)^2)
/// The evaluation goes through (x - mu)^2, so with mu = 0 the output is an
/// even function of x bit for bit.
struct RbfConfig {
    RbfFamily family = RbfFamily::multiquadric;
    double gamma = 0.09;
    bool gamma_trainable = false;  // fixing gamma is the default; see train configs
    double rho0 = 1.0;
    bool rho_trainable = true;
    double mu0 = 0.0;
    bool mu_trainable = true;
};

struct ModelConfig {
    RbfConfig c_rbf;
    bool theta_rbf = false;        // figure variant: RBF head on the theta branch too
    RbfConfig theta_rbf_cfg;       // parameters of that optional head
    int hidden_layers = 8;
    int width = 20;
    bool constrained = true;       // nonnegativity projection on the C branch
    double l1 = 0.01;
    double l2 = 0.01;

    void validate() const;
};

struct LayerSpec {
    int in = 0;
    int out = 0;
    Activation act = Activation::identity;
    std::size_t w_off = 0;
    std::size_t b_off = 0;
};

struct BranchLayout {
    int input_dim = 1;
    bool has_rbf = false;
    RbfFamily rbf_family = RbfFamily::multiquadric;
    std::size_t rbf_off = 0;  // 3 consecutive params: rho, mu, gamma
    std::vector<LayerSpec> layers;
};

struct ParamLayout {
    BranchLayout c;      // consumes only x
    BranchLayout theta;  // consumes (C(x), t)
    std::size_t total = 0;
};

ParamLayout make_layout(const ModelConfig& cfg);

// ---------------------------------------------------------------------------
// Scalar-generic forward evaluation. S is the parameter scalar (double or
// Var); A is the activation scalar (S itself, or Jet2T<S> when derivatives
// with respect to a seeded input ride along).
// ---------------------------------------------------------------------------

template <class A, class S>
A lift_to(const S& v) {
    if constexpr (std::is_same_v<A, S>) {
        return v;
    } else {
        return jet_const(v);
    }
}

template <class A>
A activate(Activation act, const A& x) {
    switch (act) {
        case Activation::relu: return relu(x);
        case Activation::sigmoid: return sigmoid(x);
        case Activation::identity: return x;
    }
    return x;
}

template <class S, class A>
A rbf_eval(RbfFamily family, const S& rho, const S& mu, const S& gamma, const A& x) {
    A d = sub_p(x, mu);
    A u = add_const(mul_p(gamma, square(d)), 1.0);
    if (family == RbfFamily::inverse_quadratic) return div_ps(rho, u);
    return mul_p(rho, sqrt(u));
}

template <class S, class A>
void dense_eval(const LayerSpec& layer, std::span<const S> p, std::span<const A> in,
                std::vector<A>& out) {
    out.resize(static_cast<std::size_t>(layer.out));
    for (int o = 0; o < layer.out; ++o) {
        A acc = lift_to<A>(p[layer.b_off + static_cast<std::size_t>(o)]);
        const std::size_t row = layer.w_off + static_cast<std::size_t>(o) * static_cast<std::size_t>(layer.in);
        for (int i = 0; i < layer.in; ++i)
            acc = acc + mul_p(p[row + static_cast<std::size_t>(i)], in[static_cast<std::size_t>(i)]);
        out[static_cast<std::size_t>(o)] = activate(layer.act, acc);
    }
}

/// Runs one branch end to end and returns its scalar output.
template <class S, class A>
A eval_branch(const BranchLayout& br, std::span<const S> p, std::span<const A> inputs) {
    thread_local std::vector<A> buf_in;
    thread_local std::vector<A> buf_out;
    buf_in.assign(inputs.begin(), inputs.end());
    if (br.has_rbf) {
        const S& rho = p[br.rbf_off];
        const S& mu = p[br.rbf_off + 1];
        const S& gamma = p[br.rbf_off + 2];
        for (A& z : buf_in) z = rbf_eval(br.rbf_family, rho, mu, gamma, z);
    }
    for (const LayerSpec& layer : br.layers) {
        dense_eval(layer, p, std::span<const A>(buf_in), buf_out);
        std::swap(buf_in, buf_out);
    }
    return buf_in[0];
}

template <class S, class A>
A eval_c_branch(const ParamLayout& layout, std::span<const S> p, const A& x) {
    const A in[1] = {x};
    return eval_branch<S, A>(layout.c, p, std::span<const A>(in, 1));
}

template <class S, class A>
A eval_theta_branch(const ParamLayout& layout, std::span<const S> p, const A& c, const A& t) {
    const A in[2] = {c, t};
    return eval_branch<S, A>(layout.theta, p, std::span<const A>(in, 2));
}

// ---------------------------------------------------------------------------
// Initializers
// ---------------------------------------------------------------------------

/// Normal draws with variance 2 / (fan_in + fan_out).
void glorot_normal_fill(std::mt19937_64& rng, std::span<double> w, int fan_in, int fan_out);
/// Uniform draws on [lo, hi].
void random_uniform_fill(std::mt19937_64& rng, std::span<double> w, double lo = -0.05,
                         double hi = 0.05);

// ---------------------------------------------------------------------------
// The serialized two-branch model
// ---------------------------------------------------------------------------

/// Two-branch network: the C branch (RBF head, ReLU stack, nonnegativity
/// constrained and l1_l2 regularized) maps x to the kernel value C(x); its
/// output, concatenated with t, feeds the sigmoid stack that produces
/// theta(x, t).
class IPinnModel {
public:
    IPinnModel() = default;

    /// Deterministic given the seed: C-branch dense weights are glorot_normal
    /// (clamped to >= 0 when constrained), theta-branch weights are
    /// random_uniform on [-0.05, 0.05], biases start at 0.
    static IPinnModel initialize(const ModelConfig& cfg, std::uint64_t seed);

    const ModelConfig& config() const { return cfg_; }
    const ParamLayout& layout() const { return layout_; }
    std::uint64_t seed() const { return seed_; }

    std::span<const double> params() const { return params_; }
    std::span<double> params() { return params_; }
    std::size_t param_count() const { return params_.size(); }

    /// Parameters clamped to >= 0 after every optimizer step.
    std::span<const std::uint8_t> nonneg_mask() const { return nonneg_; }
    /// Parameters the optimizer may move (excludes fixed RBF parameters).
    std::span<const std::uint8_t> trainable_mask() const { return trainable_; }

    double forward_c(double x) const { return eval_c_branch(layout_, params(), x); }
    Jet2 forward_c(const Jet2& x) const { return eval_c_branch<double, Jet2>(layout_, params(), x); }

    double theta_from_c(double c, double t) const {
        return eval_theta_branch(layout_, params(), c, t);
    }
    Jet2 theta_from_c(double c, const Jet2& t) const {
        return eval_theta_branch<double, Jet2>(layout_, params(), jet_const(c), t);
    }

    double forward_theta(double x, double t) const { return theta_from_c(forward_c(x), t); }
    /// With t seeded, the result carries the first and second time derivative.
    Jet2 forward_theta(double x, const Jet2& t) const { return theta_from_c(forward_c(x), t); }

    /// l1 * sum |w| + l2 * sum w^2 over the C-branch weight matrices only
    /// (biases and the theta branch are not regularized).
    double regularization_penalty() const;

private:
    friend IPinnModel load_ipinn_checkpoint(const std::string& path);
    ModelConfig cfg_;
    ParamLayout layout_;
    std::vector<double> params_;
    std::vector<std::uint8_t> nonneg_;
    std::vector<std::uint8_t> trainable_;
    std::uint64_t seed_ = 0;
};

double regularization_penalty(const IPinnModel& model);

// ---------------------------------------------------------------------------
// Parametric inverse model: two trainable kernel scalars plus a network with
// the same shape as the theta branch, taking (x, t) directly.
// ---------------------------------------------------------------------------

struct ParametricConfig {
    int hidden_layers = 8;
    int width = 20;
    double gamma0 = 3.0;
    double sigma0 = 0.5;

    void validate() const;
};

class ParametricModel {
public:
    ParametricModel() = default;

    static ParametricModel initialize(const ParametricConfig& cfg, std::uint64_t seed);

    const ParametricConfig& config() const { return cfg_; }
    const BranchLayout& net_layout() const { return net_; }
    std::uint64_t seed() const { return seed_; }

    std::span<const double> params() const { return params_; }
    std::span<double> params() { return params_; }
    std::size_t param_count() const { return params_.size(); }
    std::span<const std::uint8_t> nonneg_mask() const { return nonneg_; }
    std::span<const std::uint8_t> trainable_mask() const { return trainable_; }

    double gamma_star() const { return params_[0]; }
    double sigma_star() const { return params_[1]; }

    /// C*(xi) = gamma* exp(-sigma* xi^2)
    double kernel_at(double xi) const;

    double forward_theta(double x, double t) const;
    Jet2 forward_theta(double x, const Jet2& t) const;

private:
    friend ParametricModel load_parametric_checkpoint(const std::string& path);
    ParametricConfig cfg_;
    BranchLayout net_;
    std::vector<double> params_;
    std::vector<std::uint8_t> nonneg_;
    std::vector<std::uint8_t> trainable_;
    std::uint64_t seed_ = 0;
};

// ---------------------------------------------------------------------------
// Checkpoints: structured text, exact round trip (hexadecimal floats).
// ---------------------------------------------------------------------------

enum class CheckpointKind { ipinn, parametric };

void save_checkpoint(const IPinnModel& model, const std::string& path);
void save_checkpoint(const ParametricModel& model, const std::string& path);
CheckpointKind peek_checkpoint_kind(const std::string& path);
IPinnModel load_ipinn_checkpoint(const std::string& path);
ParametricModel load_parametric_checkpoint(const std::string& path);

}  // namespace peri
