#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "hebgha/core.hpp"

namespace hebgha {

/// Single-output classical Hebbian unit: weight vector plus bias, both
/// starting at zero.
struct HebbianModel {
    std::size_t n_inputs = 0;
    Vector weights;
    double bias = 0.0;
};

/// Dimensionality contract for the GHA weight matrix. The reduction
/// contract enforces M < N; oracle-comparison mode relaxes it to M <= N so
/// tests can run square matrices against the spectral oracle.
enum class GhaDimContract {
    kReduce,
    kOracleComparison,
};

/// The GHA weight matrix C (M output rows, N input columns).
struct WeightMatrix {
    std::size_t m_outputs = 0;
    std::size_t n_inputs = 0;
    Matrix c;

    static WeightMatrix from_matrix(Matrix c, GhaDimContract contract = GhaDimContract::kOracleComparison);
};

struct GhaConfig {
    double eta0 = 0.01;       // initial learning rate
    double tau = 1.0;         // decay constant, in update steps
    std::size_t epochs = 1;
    Seed seed;
    double init_scale = 0.01;

    void validate() const;
};

/// Default decay constant: total update-step count / 100, so eta ends two
/// orders of magnitude below eta0.
double default_tau(std::size_t samples_per_epoch, std::size_t epochs);

/// Training trace shared by both trainers: one record per update step and
/// one per epoch. Hebbian steps have no learning rate and record eta = 1.
struct TrainingTrace {
    struct StepRecord {
        std::size_t step = 0;
        double eta = 0.0;
        double delta_norm = 0.0;  // Frobenius norm of the weight delta
    };
    struct EpochRecord {
        std::size_t epoch = 0;
        double delta_sum = 0.0;  // sum of step delta norms in this epoch
        double seconds = 0.0;    // wall clock
    };

    std::vector<StepRecord> steps;
    std::vector<EpochRecord> epochs;

    std::size_t total_steps() const { return steps.size(); }
};

// --- classical Hebbian rule ---

/// All-zero model of the given input width.
HebbianModel hebbian_init(std::size_t n_inputs);

/// One supervised imprinting step: w_i += x_i * target, bias += target.
/// The output activation during training is the target itself.
HebbianModel hebbian_step(const HebbianModel& model, const Vector& x, double target);

/// Runs hebbian_step over the pairs, in order, for the given number of
/// epochs. The closed form holds exactly: final = initial + epochs *
/// per-pass sums.
std::pair<HebbianModel, TrainingTrace> hebbian_train(const HebbianModel& model,
                                                     const std::vector<std::pair<Vector, double>>& pairs,
                                                     std::size_t epochs);

// --- Generalized Hebbian Algorithm (Sanger's rule) ---

/// M x N weight matrix with entries uniform in [-init_scale, init_scale),
/// from seeded_uniform_matrix.
WeightMatrix gha_init(std::size_t m, std::size_t n, const GhaConfig& config,
                      GhaDimContract contract = GhaDimContract::kReduce);

/// y = C x.
Vector gha_output(const WeightMatrix& cw, const Vector& x);

/// Zeroes every entry strictly above the diagonal of a square matrix.
Matrix lower_triangular_of(const Matrix& a);

/// Learning rate at global step t: eta0 / (1 + t / tau).
double eta_schedule(const GhaConfig& config, std::size_t t);

/// One GHA update in the normative evaluation order, which fixes the
/// floating-point summation order and makes the fabric execution
/// reproducible bit for bit:
///
///   y = C x                 (computed with the old C)
///   r = x
///   for each row i:  r -= y_i * c_i   then   c_i += (eta * y_i) * r
///
/// Algebraically identical to C + eta * (y x^T - LT[y y^T] C).
WeightMatrix gha_step(const WeightMatrix& cw, const Vector& x, double eta);

/// The matrix-form route C + eta * (y x^T - LT[y y^T] C), evaluated with
/// explicit outer products and a matrix multiply. Cross-check only; the
/// trainers never call it.
WeightMatrix gha_step_matrix_form(const WeightMatrix& cw, const Vector& x, double eta);

/// Called after each epoch with the epoch index and the weights so far.
using EpochObserver = std::function<void(std::size_t epoch, const WeightMatrix&)>;

/// Applies gha_step over the inputs in presentation order for
/// config.epochs epochs, eta indexed by global step count.
std::pair<WeightMatrix, TrainingTrace> gha_train(const WeightMatrix& cw, const std::vector<Vector>& inputs,
                                                 const GhaConfig& config, const EpochObserver& observer = {});

namespace detail {

/// Shared row kernel: applies r -= y * row, then row += (eta * y) * r,
/// in index order. Both the reference trainer and the fabric cores call
/// this, which is what makes their outputs bit-identical.
void gha_row_update(std::span<double> row, std::span<double> residual, double y, double eta);

}  // namespace detail

}  // namespace hebgha
