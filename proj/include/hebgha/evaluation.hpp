#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hebgha/core.hpp"
#include "hebgha/data.hpp"
#include "hebgha/learning.hpp"

namespace hebgha {

/// One-vs-rest Hebbian classifier: class k's model is trained with
/// bipolar target +1 for samples of class k and -1 otherwise.
struct MulticlassHebbian {
    std::size_t classes = 0;
    std::vector<HebbianModel> models;
};

/// Class centroids in GHA-projected space.
struct CentroidClassifier {
    std::size_t m = 0;
    std::vector<Vector> centroids;
};

enum class Algorithm {
    kHebbian,
    kGha,
};

std::string algorithm_name(Algorithm a);

/// One row of the benchmark grid. `energy_joules` is only present for
/// simulated-fabric rows; reference rows leave the column empty.
struct MetricsRow {
    std::string dataset;
    std::string algorithm;
    std::string fabric_mode;
    double split_fraction = 0.0;
    double error_rate = 0.0;               // percent
    double training_time = 0.0;            // seconds, wall clock
    std::uint64_t memory_usage = 0;        // bytes, from the stated model
    double avg_convergence_rate = 0.0;     // mean per-step Frobenius delta
    double classification_accuracy = 0.0;  // percent
    std::optional<double> energy_joules;
    std::uint64_t seed = 0;
};

std::pair<MulticlassHebbian, TrainingTrace> train_multiclass_hebbian(const Dataset& train, std::size_t epochs);

int hebbian_classify(const MulticlassHebbian& model, const Vector& x);

CentroidClassifier fit_centroids(const std::vector<std::pair<Vector, int>>& projected, std::size_t classes);

int nearest_centroid_classify(const CentroidClassifier& cc, const Vector& y);

/// 100 * correct / total.
double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels);

/// Mean over all update steps of that step's weight-delta Frobenius norm.
double avg_convergence_rate(const TrainingTrace& trace);

/// Connection events in integer nanojoules (10 nJ per delivered event).
std::uint64_t energy_nanojoules(std::uint64_t connection_events);

/// events * 1e-8 J, computed through integer nanojoules so additivity is
/// exact.
double energy_estimate(std::uint64_t connection_events);

/// Model-based byte count, 8 bytes per parameter plus working buffers:
/// HA = 8 * classes * (N + 1) + 8 * N; GHA = 8 * M * N + 8 * (M + N).
std::uint64_t memory_estimate(Algorithm algorithm, std::size_t m, std::size_t n, std::size_t classes);

/// Error rate for the Hebbian classifier: stacks the per-class weight
/// rows, normalized to unit norm (zero rows skipped), as a linear code W
/// and returns 100 * mean ||x - W^T W x||^2 / ||x||^2, mirroring
/// reconstruction_error so HA and GHA share one definition.
double hebbian_error_rate(const MulticlassHebbian& model, const Dataset& inputs);

}  // namespace hebgha
