#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "peri/residual.hpp"

namespace peri {

struct LossWeights {
    double pde = 1.0;
    double data = 1.0;
    double sym = 1.0;

    void validate() const;
};

enum class DataNorm { two, sup };
std::string to_string(DataNorm n);
DataNorm data_norm_from_string(const std::string& s);

/// Learning rate decreasing quadratically with the epoch:
///   alpha_i = (1 - (i/N)^2) alpha0 + (i/N)^2 alpha1,  alpha1 = 0.7 alpha0.
struct LrSchedule {
    double alpha0 = 1e-4;
    double alpha1 = 0.7e-4;
    int n_epochs = 1000;

    static LrSchedule quadratic(double alpha0, int n_epochs) {
        return LrSchedule{alpha0, 0.7 * alpha0, n_epochs};
    }
    double at(int i) const;
};

double lr_at(const LrSchedule& schedule, int i);

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Standard Adam with bias correction, followed by projection of constrained
/// parameters onto [0, inf).
class AdamState {
public:
    AdamState() = default;
    explicit AdamState(std::size_t n, AdamConfig cfg = {});

    void step(std::span<double> params, std::span<const double> grads, double lr,
              std::span<const std::uint8_t> trainable, std::span<const std::uint8_t> nonneg);

    long step_count() const { return t_; }

private:
    std::vector<double> m_;
    std::vector<double> v_;
    AdamConfig cfg_;
    long t_ = 0;
};

struct EpochStats {
    int epoch = 0;
    double lr = 0.0;
    double loss_pde = 0.0;
    double loss_data = 0.0;
    double loss_sym = 0.0;
    double penalty = 0.0;
    double total = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    bool diverged = false;
    int diverged_epoch = -1;
    double wall_seconds = 0.0;
};

/// Columnar text: epoch lr L_pde L_data L_sym penalty total.
void save_report(const TrainReport& report, const std::string& path);
TrainReport load_report(const std::string& path);

struct TrainConfig {
    int epochs = 1000;
    double alpha0 = 1e-4;
    AdamConfig adam;
    LossWeights weights;
    DataNorm data_norm = DataNorm::two;
    SignConvention sign = SignConvention::oscillatory;
    BoundaryRule boundary = BoundaryRule::periodic;
    double delta = 10.0;  // horizon of the learned kernel's stencil

    // Full batch by default; sampled minibatches (time rows for the residual,
    // points for the data term) keep desk-scale runs short. Sampling is
    // driven by `seed` and recorded in the resolved config.
    bool collocation_full = true;
    int collocation_rows = 8;
    bool data_full = true;
    int data_points = 2048;
    std::uint64_t seed = 0;

    bool sym_on_theta = false;  // additionally penalize theta(x,t) - theta(-x,t)
    int threads = 1;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Loss components (double precision, spec-facing surface)
// ---------------------------------------------------------------------------

/// 2-norm of the residual vector (root of the sum of squares).
double loss_pde(const IPinnModel& model, const KernelVector* fixed_kernel, double delta,
                std::span<const GridPoint> points, const Grid& grid, SignConvention sign,
                BoundaryRule boundary = BoundaryRule::periodic);

/// Chosen norm of theta_model - theta_data over every dataset point.
double loss_data(const IPinnModel& model, const FieldDataset& data, DataNorm norm);
double loss_data(const ParametricModel& model, const FieldDataset& data, DataNorm norm);

/// 1-norm of C(x) - C(-x) over mirrored pairs.
double loss_sym(const IPinnModel& model, std::span<const double> xs);

/// w_pde L_pde + w_data L_data + w_sym L_sym + regularization penalty,
/// with L_sym taken over the mirrored spatial grid.
double total_loss(const IPinnModel& model, const FieldDataset& data, const LossWeights& weights,
                  const KernelVector* fixed_kernel, double delta, SignConvention sign,
                  DataNorm norm = DataNorm::two, BoundaryRule boundary = BoundaryRule::periodic);

// ---------------------------------------------------------------------------
// Training engine
// ---------------------------------------------------------------------------

/// Evaluates the composite loss, and its gradient via per-row reverse-mode
/// tapes whose results are reduced by summation (see the concurrency notes in
/// the module docs). The same summation order is used with and without tapes,
/// so value() is exactly the function the gradient differentiates.
class LossEvaluator {
public:
    struct Batch {
        std::vector<int> rows;            // time rows entering the residual term
        std::vector<std::int64_t> data;   // flattened dataset indices for the data term
    };

    struct Eval {
        double loss_pde = 0.0;
        double loss_data = 0.0;
        double loss_sym = 0.0;
        double penalty = 0.0;
        double total = 0.0;
    };

    LossEvaluator(const IPinnModel& model, const FieldDataset& data, const TrainConfig& cfg);
    LossEvaluator(const ParametricModel& model, const FieldDataset& data, const TrainConfig& cfg);

    Batch full_batch() const;
    Batch sample_batch(std::mt19937_64& rng) const;

    Eval value(std::span<const double> params, const Batch& batch) const;
    Eval value_and_grad(std::span<const double> params, const Batch& batch,
                        std::span<double> grad_out) const;

    std::size_t param_count() const { return n_params_; }

private:
    enum class Kind { ipinn, parametric };
    struct RowWork;

    Eval run(std::span<const double> params, const Batch& batch, std::span<double>* grad_out) const;
    void residual_row_values(std::span<const double> params, std::span<const double> c_grid,
                             std::span<const double> kernel_half, int it, double& s_pde,
                             double& sym_theta) const;
    void residual_row_tape(RowWork& work, std::span<const double> params,
                           std::span<const double> c_grid, std::span<const double> kernel_half,
                           int it) const;

    Kind kind_;
    const IPinnModel* ipinn_ = nullptr;
    const ParametricModel* parametric_ = nullptr;
    const FieldDataset* data_;
    TrainConfig cfg_;
    std::size_t n_params_ = 0;
    int m_max_ = 0;
    double sign_factor_ = -1.0;
};

/// Runs the RBF-iPINN training loop: per-epoch loss evaluation, Adam step
/// with the quadratic schedule, nonnegativity projection. Deterministic given
/// the seeds in single-threaded mode. On divergence the loop halts and the
/// model keeps its last finite parameters.
TrainReport train_ipinn(IPinnModel& model, const FieldDataset& data, const TrainConfig& cfg);

/// Trains the theta network together with the two kernel scalars
/// (gamma*, sigma*) inside the residual.
TrainReport train_parametric(ParametricModel& model, const FieldDataset& data,
                             const TrainConfig& cfg);

}  // namespace peri
