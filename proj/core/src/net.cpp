#include "peri/net.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "peri/textio.hpp"
#include <json.hpp>

namespace peri {

using ordered_json = nlohmann::ordered_json;

std::string to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::identity: return "identity";
    }
    return "?";
}

std::string to_string(RbfFamily f) {
    return f == RbfFamily::inverse_quadratic ? "inverse_quadratic" : "multiquadric";
}

Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "sigmoid") return Activation::sigmoid;
    if (s == "identity") return Activation::identity;
    throw std::invalid_argument("unknown activation: " + s);
}

RbfFamily rbf_family_from_string(const std::string& s) {
    if (s == "inverse_quadratic") return RbfFamily::inverse_quadratic;
    if (s == "multiquadric") return RbfFamily::multiquadric;
    throw std::invalid_argument("unknown rbf family: " + s);
}

void ModelConfig::validate() const {
    if (hidden_layers < 0) throw std::invalid_argument("model: hidden_layers must be >= 0");
    if (width < 1) throw std::invalid_argument("model: width must be >= 1");
    if (!(c_rbf.gamma > 0.0)) throw std::invalid_argument("model: rbf gamma must be positive");
    if (l1 < 0.0 || l2 < 0.0) throw std::invalid_argument("model: regularizer weights must be >= 0");
}

void ParametricConfig::validate() const {
    if (hidden_layers < 0) throw std::invalid_argument("parametric: hidden_layers must be >= 0");
    if (width < 1) throw std::invalid_argument("parametric: width must be >= 1");
    if (!(gamma0 > 0.0) || !(sigma0 > 0.0))
        throw std::invalid_argument("parametric: initial guesses must be positive");
}

namespace {

BranchLayout make_branch(int input_dim, int hidden_layers, int width, Activation hidden_act,
                         bool with_rbf, RbfFamily family, std::size_t& offset) {
    BranchLayout br;
    br.input_dim = input_dim;
    br.has_rbf = with_rbf;
    br.rbf_family = family;
    if (with_rbf) {
        br.rbf_off = offset;
        offset += 3;
    }
    int in = input_dim;
    for (int l = 0; l < hidden_layers; ++l) {
        LayerSpec spec;
        spec.in = in;
        spec.out = width;
        spec.act = hidden_act;
        spec.w_off = offset;
        offset += static_cast<std::size_t>(spec.in) * static_cast<std::size_t>(spec.out);
        spec.b_off = offset;
        offset += static_cast<std::size_t>(spec.out);
        br.layers.push_back(spec);
        in = width;
    }
    LayerSpec out_layer;
    out_layer.in = in;
    out_layer.out = 1;
    out_layer.act = Activation::identity;
    out_layer.w_off = offset;
    offset += static_cast<std::size_t>(in);
    out_layer.b_off = offset;
    offset += 1;
    br.layers.push_back(out_layer);
    return br;
}

}  // namespace

ParamLayout make_layout(const ModelConfig& cfg) {
    cfg.validate();
    ParamLayout layout;
    std::size_t offset = 0;
    layout.c = make_branch(1, cfg.hidden_layers, cfg.width, Activation::relu, true,
                           cfg.c_rbf.family, offset);
    layout.theta = make_branch(2, cfg.hidden_layers, cfg.width, Activation::sigmoid,
                               cfg.theta_rbf, cfg.theta_rbf_cfg.family, offset);
    layout.total = offset;
    return layout;
}

void glorot_normal_fill(std::mt19937_64& rng, std::span<double> w, int fan_in, int fan_out) {
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(fan_in + fan_out)));
    for (double& x : w) x = dist(rng);
}

void random_uniform_fill(std::mt19937_64& rng, std::span<double> w, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& x : w) x = dist(rng);
}

namespace {

void fill_rbf(const RbfConfig& rbf, std::span<double> p, std::size_t off,
              std::span<std::uint8_t> trainable) {
    p[off] = rbf.rho0;
    p[off + 1] = rbf.mu0;
    p[off + 2] = rbf.gamma;
    trainable[off] = rbf.rho_trainable ? 1 : 0;
    trainable[off + 1] = rbf.mu_trainable ? 1 : 0;
    trainable[off + 2] = rbf.gamma_trainable ? 1 : 0;
}

}  // namespace

IPinnModel IPinnModel::initialize(const ModelConfig& cfg, std::uint64_t seed) {
    IPinnModel model;
    model.cfg_ = cfg;
    model.layout_ = make_layout(cfg);
    model.seed_ = seed;
    model.params_.assign(model.layout_.total, 0.0);
    model.nonneg_.assign(model.layout_.total, 0);
    model.trainable_.assign(model.layout_.total, 1);

    std::mt19937_64 rng(seed);
    std::span<double> p(model.params_);

    fill_rbf(cfg.c_rbf, p, model.layout_.c.rbf_off, model.trainable_);
    for (const LayerSpec& layer : model.layout_.c.layers) {
        glorot_normal_fill(rng, p.subspan(layer.w_off, static_cast<std::size_t>(layer.in) * layer.out),
                           layer.in, layer.out);
        // biases stay 0
    }
    if (cfg.theta_rbf) fill_rbf(cfg.theta_rbf_cfg, p, model.layout_.theta.rbf_off, model.trainable_);
    for (const LayerSpec& layer : model.layout_.theta.layers) {
        random_uniform_fill(rng, p.subspan(layer.w_off, static_cast<std::size_t>(layer.in) * layer.out));
    }

    if (cfg.constrained) {
        // Dense weights and biases of the C branch, plus rho and gamma of its
        // RBF head; mu stays unconstrained.
        model.nonneg_[model.layout_.c.rbf_off] = 1;
        model.nonneg_[model.layout_.c.rbf_off + 2] = 1;
        for (const LayerSpec& layer : model.layout_.c.layers) {
            const std::size_t n_w = static_cast<std::size_t>(layer.in) * layer.out;
            for (std::size_t k = 0; k < n_w; ++k) model.nonneg_[layer.w_off + k] = 1;
            for (std::size_t k = 0; k < static_cast<std::size_t>(layer.out); ++k)
                model.nonneg_[layer.b_off + k] = 1;
        }
        for (std::size_t k = 0; k < model.params_.size(); ++k)
            if (model.nonneg_[k] && model.params_[k] < 0.0) model.params_[k] = 0.0;
    }
    return model;
}

double IPinnModel::regularization_penalty() const {
    double l1_sum = 0.0;
    double l2_sum = 0.0;
    for (const LayerSpec& layer : layout_.c.layers) {
        const std::size_t n_w = static_cast<std::size_t>(layer.in) * layer.out;
        for (std::size_t k = 0; k < n_w; ++k) {
            const double w = params_[layer.w_off + k];
            l1_sum += std::fabs(w);
            l2_sum += w * w;
        }
    }
    return cfg_.l1 * l1_sum + cfg_.l2 * l2_sum;
}

double regularization_penalty(const IPinnModel& model) { return model.regularization_penalty(); }

ParametricModel ParametricModel::initialize(const ParametricConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    ParametricModel model;
    model.cfg_ = cfg;
    model.seed_ = seed;
    std::size_t offset = 2;  // gamma*, sigma*
    model.net_ = make_branch(2, cfg.hidden_layers, cfg.width, Activation::sigmoid, false,
                             RbfFamily::multiquadric, offset);
    model.params_.assign(offset, 0.0);
    model.nonneg_.assign(offset, 0);
    model.trainable_.assign(offset, 1);
    model.params_[0] = cfg.gamma0;
    model.params_[1] = cfg.sigma0;
    model.nonneg_[0] = 1;
    model.nonneg_[1] = 1;

    std::mt19937_64 rng(seed);
    std::span<double> p(model.params_);
    for (const LayerSpec& layer : model.net_.layers) {
        random_uniform_fill(rng, p.subspan(layer.w_off, static_cast<std::size_t>(layer.in) * layer.out));
    }
    return model;
}

double ParametricModel::kernel_at(double xi) const {
    return gamma_star() * std::exp(-sigma_star() * xi * xi);
}

double ParametricModel::forward_theta(double x, double t) const {
    const double in[2] = {x, t};
    return eval_branch<double, double>(net_, params(), std::span<const double>(in, 2));
}

Jet2 ParametricModel::forward_theta(double x, const Jet2& t) const {
    const Jet2 in[2] = {jet_const(x), t};
    return eval_branch<double, Jet2>(net_, params(), std::span<const Jet2>(in, 2));
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

namespace {

ordered_json rbf_to_json(const RbfConfig& r) {
    ordered_json j;
    j["family"] = to_string(r.family);
    j["gamma"] = hex_double(r.gamma);
    j["gamma_trainable"] = r.gamma_trainable;
    j["rho0"] = hex_double(r.rho0);
    j["rho_trainable"] = r.rho_trainable;
    j["mu0"] = hex_double(r.mu0);
    j["mu_trainable"] = r.mu_trainable;
    return j;
}

RbfConfig rbf_from_json(const ordered_json& j) {
    RbfConfig r;
    r.family = rbf_family_from_string(j.at("family").get<std::string>());
    r.gamma = parse_hex_double(j.at("gamma").get<std::string>());
    r.gamma_trainable = j.at("gamma_trainable").get<bool>();
    r.rho0 = parse_hex_double(j.at("rho0").get<std::string>());
    r.rho_trainable = j.at("rho_trainable").get<bool>();
    r.mu0 = parse_hex_double(j.at("mu0").get<std::string>());
    r.mu_trainable = j.at("mu_trainable").get<bool>();
    return r;
}

ordered_json branch_shapes(const BranchLayout& br) {
    ordered_json layers = ordered_json::array();
    if (br.has_rbf) {
        ordered_json j;
        j["type"] = "rbf";
        j["family"] = to_string(br.rbf_family);
        layers.push_back(j);
    }
    for (const LayerSpec& layer : br.layers) {
        ordered_json j;
        j["type"] = "dense";
        j["in"] = layer.in;
        j["out"] = layer.out;
        j["activation"] = to_string(layer.act);
        layers.push_back(j);
    }
    return layers;
}

ordered_json params_to_json(std::span<const double> p) {
    ordered_json arr = ordered_json::array();
    for (double v : p) arr.push_back(hex_double(v));
    return arr;
}

std::vector<double> params_from_json(const ordered_json& arr) {
    std::vector<double> p;
    p.reserve(arr.size());
    for (const auto& v : arr) p.push_back(parse_hex_double(v.get<std::string>()));
    return p;
}

void write_json_file(const ordered_json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("malformed checkpoint " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

void save_checkpoint(const IPinnModel& model, const std::string& path) {
    const ModelConfig& cfg = model.config();
    ordered_json j;
    j["format"] = "perikernel-checkpoint";
    j["version"] = 1;
    j["kind"] = "ipinn";
    j["seed"] = model.seed();
    ordered_json c;
    c["c_rbf"] = rbf_to_json(cfg.c_rbf);
    c["theta_rbf"] = cfg.theta_rbf;
    if (cfg.theta_rbf) c["theta_rbf_cfg"] = rbf_to_json(cfg.theta_rbf_cfg);
    c["hidden_layers"] = cfg.hidden_layers;
    c["width"] = cfg.width;
    c["constrained"] = cfg.constrained;
    c["l1"] = hex_double(cfg.l1);
    c["l2"] = hex_double(cfg.l2);
    j["config"] = c;
    j["shapes"]["c"] = branch_shapes(model.layout().c);
    j["shapes"]["theta"] = branch_shapes(model.layout().theta);
    j["params"] = params_to_json(model.params());
    write_json_file(j, path);
}

void save_checkpoint(const ParametricModel& model, const std::string& path) {
    const ParametricConfig& cfg = model.config();
    ordered_json j;
    j["format"] = "perikernel-checkpoint";
    j["version"] = 1;
    j["kind"] = "parametric";
    j["seed"] = model.seed();
    ordered_json c;
    c["hidden_layers"] = cfg.hidden_layers;
    c["width"] = cfg.width;
    c["gamma0"] = hex_double(cfg.gamma0);
    c["sigma0"] = hex_double(cfg.sigma0);
    j["config"] = c;
    j["shapes"]["net"] = branch_shapes(model.net_layout());
    j["gamma_star"] = hex_double(model.gamma_star());
    j["sigma_star"] = hex_double(model.sigma_star());
    j["params"] = params_to_json(model.params());
    write_json_file(j, path);
}

CheckpointKind peek_checkpoint_kind(const std::string& path) {
    const ordered_json j = read_json_file(path);
    if (j.value("format", "") != "perikernel-checkpoint")
        throw std::runtime_error("not a perikernel checkpoint: " + path);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ipinn") return CheckpointKind::ipinn;
    if (kind == "parametric") return CheckpointKind::parametric;
    throw std::runtime_error("unknown checkpoint kind: " + kind);
}

IPinnModel load_ipinn_checkpoint(const std::string& path) {
    const ordered_json j = read_json_file(path);
    if (j.value("format", "") != "perikernel-checkpoint" || j.at("kind") != "ipinn")
        throw std::runtime_error("not an ipinn checkpoint: " + path);
    const ordered_json& c = j.at("config");
    ModelConfig cfg;
    cfg.c_rbf = rbf_from_json(c.at("c_rbf"));
    cfg.theta_rbf = c.at("theta_rbf").get<bool>();
    if (cfg.theta_rbf) cfg.theta_rbf_cfg = rbf_from_json(c.at("theta_rbf_cfg"));
    cfg.hidden_layers = c.at("hidden_layers").get<int>();
    cfg.width = c.at("width").get<int>();
    cfg.constrained = c.at("constrained").get<bool>();
    cfg.l1 = parse_hex_double(c.at("l1").get<std::string>());
    cfg.l2 = parse_hex_double(c.at("l2").get<std::string>());

    IPinnModel model = IPinnModel::initialize(cfg, j.at("seed").get<std::uint64_t>());
    std::vector<double> params = params_from_json(j.at("params"));
    if (params.size() != model.param_count())
        throw std::runtime_error("checkpoint parameter count mismatch in " + path);
    std::copy(params.begin(), params.end(), model.params().begin());
    return model;
}

ParametricModel load_parametric_checkpoint(const std::string& path) {
    const ordered_json j = read_json_file(path);
    if (j.value("format", "") != "perikernel-checkpoint" || j.at("kind") != "parametric")
        throw std::runtime_error("not a parametric checkpoint: " + path);
    const ordered_json& c = j.at("config");
    ParametricConfig cfg;
    cfg.hidden_layers = c.at("hidden_layers").get<int>();
    cfg.width = c.at("width").get<int>();
    cfg.gamma0 = parse_hex_double(c.at("gamma0").get<std::string>());
    cfg.sigma0 = parse_hex_double(c.at("sigma0").get<std::string>());

    ParametricModel model = ParametricModel::initialize(cfg, j.at("seed").get<std::uint64_t>());
    std::vector<double> params = params_from_json(j.at("params"));
    if (params.size() != model.param_count())
        throw std::runtime_error("checkpoint parameter count mismatch in " + path);
    std::copy(params.begin(), params.end(), model.params().begin());
    return model;
}

}  // namespace peri
