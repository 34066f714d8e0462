#include "peri/spectral.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "peri/textio.hpp"
#include <json.hpp>

namespace peri {

using ordered_json = nlohmann::ordered_json;

DispersionTable dispersion(const KernelVector& kernel, const Grid& grid) {
    grid.validate();
    const int n = grid.n_x;
    const double h = grid.h();
    if (h != kernel.h())
        throw std::invalid_argument("dispersion: grid step does not match the kernel sampling");
    const double period = static_cast<double>(n) * h;
    const int m_max = kernel.halfwidth();

    DispersionTable table;
    table.k.resize(static_cast<std::size_t>(n));
    table.omega2.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int jj = j <= n / 2 ? j : j - n;
        const double k = 2.0 * std::numbers::pi * static_cast<double>(jj) / period;
        double acc = 0.0;
        for (int m = -m_max; m <= m_max; ++m) {
            const double xi = static_cast<double>(m) * h;
            acc += kernel.quad_weight(m) * kernel.at(m) * (1.0 - std::cos(k * xi)) * h;
        }
        table.k[static_cast<std::size_t>(j)] = k;
        table.omega2[static_cast<std::size_t>(j)] = acc;
        if (acc < 0.0) table.negative_modes.push_back(j);
    }
    return table;
}

std::vector<std::complex<double>> dft(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) *
                                 static_cast<double>(j) / static_cast<double>(n);
            acc += x[static_cast<std::size_t>(j)] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

std::vector<double> idft_real(std::span<const std::complex<double>> c) {
    const int n = static_cast<int>(c.size());
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        std::complex<double> acc(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) *
                                 static_cast<double>(j) / static_cast<double>(n);
            acc += c[static_cast<std::size_t>(k)] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out[static_cast<std::size_t>(j)] = acc.real() / static_cast<double>(n);
    }
    return out;
}

std::vector<double> initial_condition(const DatasetMeta& meta, const Grid& grid) {
    std::vector<double> theta0(static_cast<std::size_t>(grid.n_x));
    if (meta.ic_kind == "gaussian_pulse") {
        for (int i = 0; i < grid.n_x; ++i) {
            const double x = grid.x(i);
            theta0[static_cast<std::size_t>(i)] = meta.ic_amplitude * std::exp(-meta.ic_width * x * x);
        }
    } else if (meta.ic_kind == "cosine_mode") {
        const double period = static_cast<double>(grid.n_x) * grid.h();
        const double k = 2.0 * std::numbers::pi * static_cast<double>(meta.ic_mode) / period;
        for (int i = 0; i < grid.n_x; ++i)
            theta0[static_cast<std::size_t>(i)] =
                meta.ic_amplitude * std::cos(k * (grid.x(i) - grid.x_min));
    } else {
        throw std::invalid_argument("unknown initial condition kind: " + meta.ic_kind);
    }
    return theta0;
}

FieldDataset solve_forward(const KernelVector& kernel, std::span<const double> theta0,
                           std::span<const double> v0, const Grid& grid, SignConvention sign) {
    grid.validate();
    const int n = grid.n_x;
    if (static_cast<int>(theta0.size()) != n || static_cast<int>(v0.size()) != n)
        throw std::invalid_argument("solve_forward: initial data does not match the grid");

    const DispersionTable table = dispersion(kernel, grid);
    const auto theta0_hat = dft(theta0);
    const auto v0_hat = dft(v0);

    if (sign == SignConvention::paper) {
        double omega_max = 0.0;
        for (double w2 : table.omega2) omega_max = std::max(omega_max, std::sqrt(std::max(w2, 0.0)));
        const double span_t = std::max(std::fabs(grid.t_max - grid.t_min), 0.0);
        if (omega_max * span_t > 700.0)
            throw std::overflow_error("solve_forward: paper-sign growth exceeds overflow threshold");
    }

    FieldDataset ds;
    ds.grid = grid;
    ds.theta.resize(static_cast<std::size_t>(grid.n_t) * n);
    ds.meta.sign = sign;
    ds.meta.v0.assign(v0.begin(), v0.end());

    std::vector<std::complex<double>> hat(static_cast<std::size_t>(n));
    for (int it = 0; it < grid.n_t; ++it) {
        const double tau = grid.t(it) - grid.t_min;
        for (int j = 0; j < n; ++j) {
            const double w2 = table.omega2[static_cast<std::size_t>(j)];
            std::complex<double> c;
            if (sign == SignConvention::oscillatory) {
                if (w2 > 0.0) {
                    const double w = std::sqrt(w2);
                    c = theta0_hat[static_cast<std::size_t>(j)] * std::cos(w * tau) +
                        v0_hat[static_cast<std::size_t>(j)] * (std::sin(w * tau) / w);
                } else {
                    c = theta0_hat[static_cast<std::size_t>(j)] + v0_hat[static_cast<std::size_t>(j)] * tau;
                }
            } else {
                if (w2 > 0.0) {
                    const double w = std::sqrt(w2);
                    c = theta0_hat[static_cast<std::size_t>(j)] * std::cosh(w * tau) +
                        v0_hat[static_cast<std::size_t>(j)] * (std::sinh(w * tau) / w);
                } else {
                    c = theta0_hat[static_cast<std::size_t>(j)] + v0_hat[static_cast<std::size_t>(j)] * tau;
                }
            }
            hat[static_cast<std::size_t>(j)] = c;
        }
        const std::vector<double> row = idft_real(hat);
        std::copy(row.begin(), row.end(),
                  ds.theta.begin() + static_cast<std::ptrdiff_t>(it) * n);
    }
    return ds;
}

double mode_energy(const FieldDataset& dataset, const DispersionTable& table, double t) {
    if (dataset.meta.sign != SignConvention::oscillatory)
        throw std::invalid_argument("mode_energy: requires an oscillatory dataset");
    const Grid& grid = dataset.grid;
    const double dt = grid.dt();
    const double pos = dt > 0.0 ? (t - grid.t_min) / dt : 0.0;
    const int it = static_cast<int>(std::lround(pos));
    if (it < 0 || it >= grid.n_t || std::fabs(pos - it) > 1e-9)
        throw std::invalid_argument("mode_energy: t is not a grid time");
    if (static_cast<int>(dataset.meta.v0.size()) != grid.n_x)
        throw std::invalid_argument("mode_energy: dataset is missing v0 metadata");

    const auto theta_hat = dft(dataset.row(it));
    const auto theta0_hat = dft(dataset.row(0));
    const auto v0_hat = dft(dataset.meta.v0);
    const double tau = grid.t(it) - grid.t_min;

    double energy = 0.0;
    for (int j = 0; j < grid.n_x; ++j) {
        const double w2 = table.omega2[static_cast<std::size_t>(j)];
        std::complex<double> dtheta;
        if (w2 > 0.0) {
            const double w = std::sqrt(w2);
            dtheta = -theta0_hat[static_cast<std::size_t>(j)] * (w * std::sin(w * tau)) +
                     v0_hat[static_cast<std::size_t>(j)] * std::cos(w * tau);
        } else {
            dtheta = v0_hat[static_cast<std::size_t>(j)];
        }
        energy += w2 * std::norm(theta_hat[static_cast<std::size_t>(j)]) + std::norm(dtheta);
    }
    return energy;
}

std::vector<ResidualSample> dataset_residual(const FieldDataset& dataset, const KernelVector& kernel,
                                             SignConvention sign, BoundaryRule boundary) {
    const Grid& grid = dataset.grid;
    const double dt = grid.dt();
    if (grid.n_t < 3) throw std::invalid_argument("dataset_residual: needs at least 3 time rows");
    const double s = sign == SignConvention::paper ? 1.0 : -1.0;

    std::vector<ResidualSample> out;
    out.reserve(static_cast<std::size_t>(grid.n_t - 2) * grid.n_x);
    for (int it = 1; it + 1 < grid.n_t; ++it) {
        const std::vector<double> q = nonlocal_rhs(dataset.row(it), kernel, grid.h(), boundary);
        for (int ix = 0; ix < grid.n_x; ++ix) {
            const double dtt = (dataset.at(it - 1, ix) - 2.0 * dataset.at(it, ix) + dataset.at(it + 1, ix)) / (dt * dt);
            out.push_back(ResidualSample{grid.x(ix), grid.t(it), dtt - s * q[static_cast<std::size_t>(ix)]});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dataset file I/O
// ---------------------------------------------------------------------------

namespace {

ordered_json kernel_to_json(const KernelSpec& k) {
    ordered_json j;
    j["kind"] = to_string(k.kind);
    j["delta"] = hex_double(k.delta);
    switch (k.kind) {
        case KernelKind::v_shape: j["slope"] = hex_double(k.slope); break;
        case KernelKind::boundary_v: break;
        case KernelKind::gaussian:
            j["amplitude"] = hex_double(k.amplitude);
            j["width"] = hex_double(k.width);
            break;
        case KernelKind::parametric_gaussian:
            j["gamma_star"] = hex_double(k.gamma_star);
            j["sigma_star"] = hex_double(k.sigma_star);
            break;
    }
    return j;
}

KernelSpec kernel_from_json(const ordered_json& j) {
    KernelSpec k;
    k.kind = kernel_kind_from_string(j.at("kind").get<std::string>());
    k.delta = parse_hex_double(j.at("delta").get<std::string>());
    switch (k.kind) {
        case KernelKind::v_shape: k.slope = parse_hex_double(j.at("slope").get<std::string>()); break;
        case KernelKind::boundary_v: break;
        case KernelKind::gaussian:
            k.amplitude = parse_hex_double(j.at("amplitude").get<std::string>());
            k.width = parse_hex_double(j.at("width").get<std::string>());
            break;
        case KernelKind::parametric_gaussian:
            k.gamma_star = parse_hex_double(j.at("gamma_star").get<std::string>());
            k.sigma_star = parse_hex_double(j.at("sigma_star").get<std::string>());
            break;
    }
    return k;
}

}  // namespace

void save_dataset(const FieldDataset& dataset, const std::string& path) {
    const Grid& g = dataset.grid;
    ordered_json meta;
    meta["grid"]["x_min"] = hex_double(g.x_min);
    meta["grid"]["x_max"] = hex_double(g.x_max);
    meta["grid"]["n_x"] = g.n_x;
    meta["grid"]["t_min"] = hex_double(g.t_min);
    meta["grid"]["t_max"] = hex_double(g.t_max);
    meta["grid"]["n_t"] = g.n_t;
    meta["h"] = hex_double(g.h());
    meta["dt"] = hex_double(g.dt());
    meta["kernel"] = kernel_to_json(dataset.meta.kernel);
    meta["delta"] = hex_double(sampling_horizon(dataset.meta.kernel));
    meta["sign"] = to_string(dataset.meta.sign);
    meta["boundary"] = to_string(dataset.meta.boundary);
    meta["seed"] = dataset.meta.seed;
    meta["ic"]["kind"] = dataset.meta.ic_kind;
    meta["ic"]["amplitude"] = hex_double(dataset.meta.ic_amplitude);
    meta["ic"]["width"] = hex_double(dataset.meta.ic_width);
    meta["ic"]["mode"] = dataset.meta.ic_mode;
    ordered_json v0 = ordered_json::array();
    for (double v : dataset.meta.v0) v0.push_back(hex_double(v));
    meta["ic"]["v0"] = v0;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "# perikernel-field v1\n";
    out << "# meta " << meta.dump() << "\n";
    out << "# columns: x t theta\n";
    for (int it = 0; it < g.n_t; ++it) {
        for (int ix = 0; ix < g.n_x; ++ix) {
            out << dec17(g.x(ix)) << ' ' << dec17(g.t(it)) << ' ' << dec17(dataset.at(it, ix)) << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

FieldDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "# perikernel-field v1")
        throw std::runtime_error("not a perikernel field dataset: " + path);
    if (!std::getline(in, line) || line.rfind("# meta ", 0) != 0)
        throw std::runtime_error("dataset missing metadata header: " + path);
    ordered_json meta;
    try {
        meta = ordered_json::parse(line.substr(7));
    } catch (const std::exception& e) {
        throw std::runtime_error("malformed dataset metadata in " + path + ": " + e.what());
    }
    if (!std::getline(in, line) || line != "# columns: x t theta")
        throw std::runtime_error("dataset missing column header: " + path);

    FieldDataset ds;
    ds.grid.x_min = parse_hex_double(meta.at("grid").at("x_min").get<std::string>());
    ds.grid.x_max = parse_hex_double(meta.at("grid").at("x_max").get<std::string>());
    ds.grid.n_x = meta.at("grid").at("n_x").get<int>();
    ds.grid.t_min = parse_hex_double(meta.at("grid").at("t_min").get<std::string>());
    ds.grid.t_max = parse_hex_double(meta.at("grid").at("t_max").get<std::string>());
    ds.grid.n_t = meta.at("grid").at("n_t").get<int>();
    ds.grid.validate();
    ds.meta.kernel = kernel_from_json(meta.at("kernel"));
    ds.meta.sign = sign_from_string(meta.at("sign").get<std::string>());
    ds.meta.boundary = boundary_from_string(meta.at("boundary").get<std::string>());
    ds.meta.seed = meta.at("seed").get<std::uint64_t>();
    ds.meta.ic_kind = meta.at("ic").at("kind").get<std::string>();
    ds.meta.ic_amplitude = parse_hex_double(meta.at("ic").at("amplitude").get<std::string>());
    ds.meta.ic_width = parse_hex_double(meta.at("ic").at("width").get<std::string>());
    ds.meta.ic_mode = meta.at("ic").at("mode").get<int>();
    for (const auto& v : meta.at("ic").at("v0")) ds.meta.v0.push_back(parse_hex_double(v.get<std::string>()));

    ds.theta.resize(static_cast<std::size_t>(ds.grid.n_t) * ds.grid.n_x);
    for (int it = 0; it < ds.grid.n_t; ++it) {
        for (int ix = 0; ix < ds.grid.n_x; ++ix) {
            if (!std::getline(in, line))
                throw std::runtime_error("dataset payload truncated: " + path);
            std::istringstream row(line);
            std::string xs, ts, vs;
            if (!(row >> xs >> ts >> vs))
                throw std::runtime_error("malformed dataset row in " + path + ": " + line);
            const double x = parse_double(xs);
            const double t = parse_double(ts);
            if (x != ds.grid.x(ix) || t != ds.grid.t(it))
                throw std::runtime_error("dataset row coordinates disagree with the grid in " + path);
            ds.theta[static_cast<std::size_t>(it) * ds.grid.n_x + static_cast<std::size_t>(ix)] =
                parse_double(vs);
        }
    }
    return ds;
}

}  // namespace peri
