#include "peri/tape.hpp"

#include "peri/jet.hpp"

namespace peri {

void Tape::backward(std::span<double> adj) const {
    if (adj.size() != nodes_.size())
        throw std::invalid_argument("Tape::backward: adjoint buffer size mismatch");
    std::size_t visited = 0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        ++visited;
        const double a = adj[i];
        if (a == 0.0) continue;
        const Node& n = nodes_[i];
        if (n.p0 >= 0) adj[static_cast<std::size_t>(n.p0)] += n.w0 * a;
        if (n.p1 >= 0) adj[static_cast<std::size_t>(n.p1)] += n.w1 * a;
    }
    last_visits_ = visited;
}

std::vector<double> Tape::gradient(const Var& loss) const {
    if (loss.tape() != this) throw std::invalid_argument("Tape::gradient: loss lives on another tape");
    if (!std::isfinite(loss.value())) throw std::runtime_error("Tape::gradient: loss value is not finite");
    std::vector<double> adj(nodes_.size(), 0.0);
    adj[static_cast<std::size_t>(loss.id())] = 1.0;
    backward(adj);
    return adj;
}

std::vector<double> grad(const Var& loss, std::span<const Var> params) {
    const Tape* tape = loss.tape();
    const std::vector<double> adj = tape->gradient(loss);
    std::vector<double> out;
    out.reserve(params.size());
    for (const Var& p : params) {
        if (p.tape() != tape) throw std::invalid_argument("grad: parameter lives on another tape");
        out.push_back(adj[static_cast<std::size_t>(p.id())]);
    }
    return out;
}

Jet2 jet_apply(ElemFn f, const Jet2& x) {
    switch (f) {
        case ElemFn::neg: return -x;
        case ElemFn::sqrt: return sqrt(x);
        case ElemFn::exp: return exp(x);
        case ElemFn::relu: return relu(x);
        case ElemFn::sigmoid: return sigmoid(x);
        case ElemFn::square: return square(x);
        default: throw std::invalid_argument("jet_apply: binary function id used as unary");
    }
}

Jet2 jet_apply(ElemFn f, const Jet2& x, const Jet2& y) {
    switch (f) {
        case ElemFn::add: return x + y;
        case ElemFn::mul: return x * y;
        case ElemFn::div: return x / y;
        default: throw std::invalid_argument("jet_apply: unary function id used as binary");
    }
}

}  // namespace peri
