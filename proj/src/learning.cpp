#include "hebgha/learning.hpp"

#include <chrono>
#include <cmath>

namespace hebgha {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

WeightMatrix WeightMatrix::from_matrix(Matrix c, GhaDimContract contract) {
    const std::size_t m = c.rows();
    const std::size_t n = c.cols();
    if (m == 0 || n == 0) {
        throw ValueError("invalid dimension: weight matrix must be at least 1x1");
    }
    if (contract == GhaDimContract::kReduce && m >= n) {
        throw ValueError("dimension contract: M < N required outside oracle-comparison mode");
    }
    if (contract == GhaDimContract::kOracleComparison && m > n) {
        throw ValueError("dimension contract: M <= N required");
    }
    return WeightMatrix{m, n, std::move(c)};
}

void GhaConfig::validate() const {
    if (!(eta0 > 0.0)) {
        throw ValueError("invalid rate: eta0 must be > 0");
    }
    if (!(tau > 0.0)) {
        throw ValueError("invalid config: tau must be > 0");
    }
    if (epochs < 1) {
        throw ValueError("invalid config: epochs must be >= 1");
    }
    if (!(init_scale > 0.0)) {
        throw ValueError("invalid config: init_scale must be > 0");
    }
}

double default_tau(std::size_t samples_per_epoch, std::size_t epochs) {
    // One hundredth of the total step count leaves the final rate at
    // eta0/101, low enough that the steady-state cross-row correlation
    // stays within the orthonormality budget.
    const double steps = static_cast<double>(samples_per_epoch) * static_cast<double>(epochs);
    return steps > 100.0 ? steps / 100.0 : 1.0;
}

HebbianModel hebbian_init(std::size_t n_inputs) {
    if (n_inputs == 0) {
        throw ValueError("invalid dimension: n_inputs must be >= 1");
    }
    return HebbianModel{n_inputs, Vector(n_inputs, 0.0), 0.0};
}

HebbianModel hebbian_step(const HebbianModel& model, const Vector& x, double target) {
    if (x.size() != model.n_inputs) {
        throw ShapeError("hebbian_step: input length does not match model");
    }
    HebbianModel next = model;
    for (std::size_t i = 0; i < x.size(); ++i) {
        next.weights[i] += x[i] * target;
    }
    next.bias += target;
    return next;
}

std::pair<HebbianModel, TrainingTrace> hebbian_train(const HebbianModel& model,
                                                     const std::vector<std::pair<Vector, double>>& pairs,
                                                     std::size_t epochs) {
    if (pairs.empty()) {
        throw EmptyDatasetError("hebbian_train: empty pair sequence");
    }
    if (epochs < 1) {
        throw ValueError("hebbian_train: epochs must be >= 1");
    }
    HebbianModel current = model;
    TrainingTrace trace;
    trace.steps.reserve(epochs * pairs.size());
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        const auto start = Clock::now();
        double delta_sum = 0.0;
        for (const auto& [x, target] : pairs) {
            HebbianModel next = hebbian_step(current, x, target);
            double ss = 0.0;
            for (std::size_t i = 0; i < next.weights.size(); ++i) {
                const double d = next.weights[i] - current.weights[i];
                ss += d * d;
            }
            const double db = next.bias - current.bias;
            ss += db * db;
            const double norm = std::sqrt(ss);
            trace.steps.push_back({t, 1.0, norm});
            delta_sum += norm;
            current = std::move(next);
            ++t;
        }
        trace.epochs.push_back({epoch, delta_sum, seconds_since(start)});
    }
    return {std::move(current), std::move(trace)};
}

WeightMatrix gha_init(std::size_t m, std::size_t n, const GhaConfig& config, GhaDimContract contract) {
    config.validate();
    if (m == 0 || n == 0) {
        throw ValueError("invalid dimension: m and n must be >= 1");
    }
    if (contract == GhaDimContract::kReduce && m >= n) {
        throw ValueError("dimension contract: M < N required outside oracle-comparison mode");
    }
    if (m > n) {
        throw ValueError("dimension contract: M <= N required");
    }
    Matrix c = seeded_uniform_matrix(m, n, -config.init_scale, config.init_scale, config.seed);
    return WeightMatrix{m, n, std::move(c)};
}

Vector gha_output(const WeightMatrix& cw, const Vector& x) {
    if (x.size() != cw.n_inputs) {
        throw ShapeError("gha_output: input length does not match N");
    }
    Vector y(cw.m_outputs, 0.0);
    for (std::size_t i = 0; i < cw.m_outputs; ++i) {
        y[i] = dot(cw.c.row(i), x);
    }
    return y;
}

Matrix lower_triangular_of(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw ShapeError("lower_triangular_of: matrix must be square");
    }
    Matrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            out(i, j) = 0.0;
        }
    }
    return out;
}

double eta_schedule(const GhaConfig& config, std::size_t t) {
    return config.eta0 / (1.0 + static_cast<double>(t) / config.tau);
}

namespace detail {

void gha_row_update(std::span<double> row, std::span<double> residual, double y, double eta) {
    const std::size_t n = row.size();
    for (std::size_t j = 0; j < n; ++j) {
        residual[j] -= y * row[j];
    }
    const double scale = eta * y;
    for (std::size_t j = 0; j < n; ++j) {
        row[j] += scale * residual[j];
    }
}

}  // namespace detail

WeightMatrix gha_step(const WeightMatrix& cw, const Vector& x, double eta) {
    if (x.size() != cw.n_inputs) {
        throw ShapeError("gha_step: input length does not match N");
    }
    if (!(eta > 0.0)) {
        throw ValueError("invalid rate: eta must be > 0");
    }
    WeightMatrix next = cw;
    const Vector y = gha_output(cw, x);
    Vector residual = x;
    for (std::size_t i = 0; i < next.m_outputs; ++i) {
        detail::gha_row_update(next.c.row(i), residual, y[i], eta);
    }
    return next;
}

WeightMatrix gha_step_matrix_form(const WeightMatrix& cw, const Vector& x, double eta) {
    if (x.size() != cw.n_inputs) {
        throw ShapeError("gha_step_matrix_form: input length does not match N");
    }
    if (!(eta > 0.0)) {
        throw ValueError("invalid rate: eta must be > 0");
    }
    const std::size_t m = cw.m_outputs;
    const std::size_t n = cw.n_inputs;
    const Vector y = gha_output(cw, x);

    Matrix yxt(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            yxt(i, j) = y[i] * x[j];
        }
    }
    Matrix yyt(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            yyt(i, j) = y[i] * y[j];
        }
    }
    const Matrix lt = lower_triangular_of(yyt);

    WeightMatrix next = cw;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double ltc = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                ltc += lt(i, k) * cw.c(k, j);
            }
            next.c(i, j) = cw.c(i, j) + eta * (yxt(i, j) - ltc);
        }
    }
    return next;
}

std::pair<WeightMatrix, TrainingTrace> gha_train(const WeightMatrix& cw, const std::vector<Vector>& inputs,
                                                 const GhaConfig& config, const EpochObserver& observer) {
    config.validate();
    if (inputs.empty()) {
        throw EmptyDatasetError("gha_train: empty input sequence");
    }
    for (const Vector& x : inputs) {
        if (x.size() != cw.n_inputs) {
            throw ShapeError("gha_train: input length does not match N");
        }
    }
    WeightMatrix current = cw;
    TrainingTrace trace;
    trace.steps.reserve(config.epochs * inputs.size());
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const auto start = Clock::now();
        double delta_sum = 0.0;
        for (const Vector& x : inputs) {
            const double eta = eta_schedule(config, t);
            WeightMatrix next = gha_step(current, x, eta);
            const double norm = frobenius_delta(next.c, current.c);
            trace.steps.push_back({t, eta, norm});
            delta_sum += norm;
            current = std::move(next);
            ++t;
        }
        trace.epochs.push_back({epoch, delta_sum, seconds_since(start)});
        if (observer) {
            observer(epoch, current);
        }
    }
    return {std::move(current), std::move(trace)};
}

}  // namespace hebgha
