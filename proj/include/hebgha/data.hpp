#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hebgha/core.hpp"

namespace hebgha {

struct LabeledSample {
    Vector features;
    int label = 0;
};

struct Dataset {
    std::string name;
    std::size_t dim = 0;
    std::size_t classes = 0;
    std::vector<LabeledSample> samples;
    std::string provenance;

    // Set by synth_gaussian only: the planted orthonormal basis (row i is
    // the direction of eigenvalue i) and the planted spectrum.
    std::optional<Matrix> planted_basis;
    std::optional<Vector> planted_spectrum;

    std::vector<Vector> feature_vectors() const;
    std::vector<int> labels() const;
};

/// Label column selected by zero-based index, or by name (requires a
/// header row).
using LabelColumn = std::variant<std::size_t, std::string>;

/// Loads a comma-separated file: numeric feature columns in file order
/// excluding the label column; labels mapped to dense ids 0..K-1 by first
/// appearance. Rows with non-numeric feature cells are rejected with a
/// 1-based line diagnostic appended to `diagnostics` (when given); ragged
/// rows abort the load.
Dataset load_csv(const std::string& path, const LabelColumn& label_column, bool has_header,
                 std::vector<std::string>* diagnostics = nullptr);

struct SplitSpec {
    double train_fraction = 0.7;  // in (0, 1)
    Seed seed;
};

/// Fisher-Yates shuffle of the indices with the seeded PRNG, first
/// floor(fraction * n) to train. Disjoint, exhaustive, order within each
/// part is the shuffled order.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

/// Per-feature mean and population (1/n) standard deviation, learned from
/// the training portion only. Zero-variance features map to constant 0.
struct Standardizer {
    Vector mean;
    Vector stddev;
    std::vector<std::uint8_t> degenerate;

    Vector apply(const Vector& x) const;
};

struct StandardizeResult {
    Dataset train;
    Dataset test;
    Standardizer standardizer;
};

StandardizeResult standardize(const Dataset& train, const Dataset& test);

/// Zero-mean Gaussian samples with covariance sum lambda_i v_i v_i^T,
/// where the v_i are the rows of a seeded random orthogonal matrix (QR of
/// a seeded Gaussian matrix). Eigenvalues must be strictly positive and
/// strictly descending. The planted basis and spectrum are recorded on
/// the dataset; labels are all 0.
Dataset synth_gaussian(std::size_t n_samples, const Vector& eigenvalues, Seed seed);

}  // namespace hebgha
