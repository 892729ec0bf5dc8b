#include "hebgha/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hebgha {

std::string algorithm_name(Algorithm a) {
    return a == Algorithm::kHebbian ? "HA" : "GHA";
}

std::pair<MulticlassHebbian, TrainingTrace> train_multiclass_hebbian(const Dataset& train, std::size_t epochs) {
    if (train.classes < 2) {
        throw ValueError("invalid task: multiclass training needs at least 2 classes");
    }
    if (train.samples.empty()) {
        throw EmptyDatasetError("train_multiclass_hebbian: empty dataset");
    }
    MulticlassHebbian out;
    out.classes = train.classes;
    TrainingTrace merged;  // per-class traces concatenated in class order
    for (std::size_t k = 0; k < train.classes; ++k) {
        std::vector<std::pair<Vector, double>> pairs;
        pairs.reserve(train.samples.size());
        for (const LabeledSample& s : train.samples) {
            pairs.emplace_back(s.features, s.label == static_cast<int>(k) ? 1.0 : -1.0);
        }
        auto [model, trace] = hebbian_train(hebbian_init(train.dim), pairs, epochs);
        out.models.push_back(std::move(model));
        const std::size_t offset = merged.steps.size();
        for (const auto& step : trace.steps) {
            merged.steps.push_back({offset + step.step, step.eta, step.delta_norm});
        }
        for (const auto& epoch : trace.epochs) {
            merged.epochs.push_back(epoch);
        }
    }
    return {std::move(out), std::move(merged)};
}

int hebbian_classify(const MulticlassHebbian& model, const Vector& x) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < model.models.size(); ++k) {
        const HebbianModel& m = model.models[k];
        if (x.size() != m.n_inputs) {
            throw ShapeError("hebbian_classify: dimension mismatch");
        }
        const double score = dot(m.weights, x) + m.bias;
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(k);
        }
    }
    return best;
}

CentroidClassifier fit_centroids(const std::vector<std::pair<Vector, int>>& projected, std::size_t classes) {
    if (projected.empty()) {
        throw EmptyDatasetError("fit_centroids: no projected samples");
    }
    const std::size_t m = projected.front().first.size();
    CentroidClassifier cc;
    cc.m = m;
    cc.centroids.assign(classes, Vector(m, 0.0));
    std::vector<std::size_t> counts(classes, 0);
    for (const auto& [y, label] : projected) {
        if (y.size() != m) {
            throw ShapeError("fit_centroids: inconsistent projection dimension");
        }
        if (label < 0 || static_cast<std::size_t>(label) >= classes) {
            throw ValueError("fit_centroids: label out of range");
        }
        for (std::size_t j = 0; j < m; ++j) {
            cc.centroids[label][j] += y[j];
        }
        ++counts[label];
    }
    for (std::size_t k = 0; k < classes; ++k) {
        if (counts[k] == 0) {
            throw ValueError("invalid task: class " + std::to_string(k) + " missing from train projection");
        }
        for (double& v : cc.centroids[k]) {
            v /= static_cast<double>(counts[k]);
        }
    }
    return cc;
}

int nearest_centroid_classify(const CentroidClassifier& cc, const Vector& y) {
    if (y.size() != cc.m) {
        throw ShapeError("nearest_centroid_classify: dimension mismatch");
    }
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cc.centroids.size(); ++k) {
        double d = 0.0;
        for (std::size_t j = 0; j < cc.m; ++j) {
            const double diff = y[j] - cc.centroids[k][j];
            d += diff * diff;
        }
        if (d < best_dist) {
            best_dist = d;
            best = static_cast<int>(k);
        }
    }
    return best;
}

double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size()) {
        throw ShapeError("accuracy: prediction and label counts differ");
    }
    if (predictions.empty()) {
        throw EmptyDatasetError("accuracy: empty prediction sequence");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] == labels[i]) {
            ++correct;
        }
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(predictions.size());
}

double avg_convergence_rate(const TrainingTrace& trace) {
    if (trace.steps.empty()) {
        throw UndefinedMetricError("avg_convergence_rate: empty trace");
    }
    double sum = 0.0;
    for (const auto& step : trace.steps) {
        sum += step.delta_norm;
    }
    return sum / static_cast<double>(trace.steps.size());
}

std::uint64_t energy_nanojoules(std::uint64_t connection_events) {
    return connection_events * 10ULL;
}

double energy_estimate(std::uint64_t connection_events) {
    return static_cast<double>(energy_nanojoules(connection_events)) / 1e9;
}

std::uint64_t memory_estimate(Algorithm algorithm, std::size_t m, std::size_t n, std::size_t classes) {
    if (algorithm == Algorithm::kHebbian) {
        return 8ULL * classes * (n + 1) + 8ULL * n;
    }
    return 8ULL * m * n + 8ULL * (m + n);
}

double hebbian_error_rate(const MulticlassHebbian& model, const Dataset& inputs) {
    std::vector<Vector> rows;
    for (const HebbianModel& m : model.models) {
        const double norm = std::sqrt(dot(m.weights, m.weights));
        if (norm == 0.0) {
            continue;
        }
        Vector row = m.weights;
        for (double& v : row) {
            v /= norm;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw UndefinedMetricError("hebbian_error_rate: all weight rows are zero");
    }
    const std::size_t n = rows.front().size();

    double sum = 0.0;
    std::size_t used = 0;
    for (const LabeledSample& s : inputs.samples) {
        const Vector& x = s.features;
        if (x.size() != n) {
            throw ShapeError("hebbian_error_rate: dimension mismatch");
        }
        double norm = 0.0;
        for (const double v : x) {
            norm += v * v;
        }
        if (norm == 0.0) {
            continue;
        }
        Vector y(rows.size(), 0.0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            y[i] = dot(rows[i], x);
        }
        double err = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double xhat = 0.0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                xhat += rows[i][j] * y[i];
            }
            const double d = x[j] - xhat;
            err += d * d;
        }
        sum += err / norm;
        ++used;
    }
    if (used == 0) {
        throw UndefinedMetricError("hebbian_error_rate: all samples have zero norm");
    }
    return 100.0 * sum / static_cast<double>(used);
}

}  // namespace hebgha
