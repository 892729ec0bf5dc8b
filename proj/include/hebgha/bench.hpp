#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hebgha/data.hpp"
#include "hebgha/evaluation.hpp"
#include "hebgha/fabric.hpp"

namespace hebgha {

enum class FabricMode {
    kReference,
    kSimulatedFabric,
};

std::string fabric_mode_name(FabricMode mode);

struct SyntheticSpec {
    std::size_t samples = 0;
    Vector eigenvalues;
    Seed seed;
};

/// Flat JSON experiment configuration. The key list is closed: unknown
/// keys are errors so that typos cannot silently fall back to defaults.
///
/// Keys: dataset_name, dataset_csv, label_column, has_header,
/// synthetic_samples, synthetic_eigenvalues, synthetic_seed, algorithms,
/// splits, seeds, gha_outputs, gha_eta0, gha_tau, gha_epochs,
/// gha_init_scale, ha_epochs, fabric_modes, fabric_width, fabric_height,
/// fabric_cores.
struct ExperimentConfig {
    std::string dataset_name;  // defaults to CSV basename or "synthetic"
    std::optional<std::string> dataset_csv;
    LabelColumn label_column = std::size_t{0};
    bool has_header = true;
    std::optional<SyntheticSpec> synthetic;

    std::vector<Algorithm> algorithms{Algorithm::kHebbian, Algorithm::kGha};
    std::vector<double> splits{0.7, 0.5, 0.8, 0.3};
    std::vector<std::uint64_t> seeds{0};

    std::size_t gha_outputs = 3;
    double gha_eta0 = 0.01;
    double gha_tau = 0.0;  // 0 means default_tau(samples per epoch, epochs)
    std::size_t gha_epochs = 50;
    double gha_init_scale = 0.01;
    std::size_t ha_epochs = 1;

    std::vector<FabricMode> fabric_modes{FabricMode::kReference, FabricMode::kSimulatedFabric};
    std::size_t fabric_width = 3;
    std::size_t fabric_height = 3;
    std::size_t fabric_cores = 2;

    void validate() const;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
};

/// One grid cell, in deterministic order: algorithm, split, seed, fabric
/// mode (the dataset is fixed per config). `index` is the flattened
/// position used by `hebgha train --cell`.
struct GridCell {
    std::size_t index = 0;
    Algorithm algorithm = Algorithm::kGha;
    double split_fraction = 0.7;
    std::uint64_t seed = 0;
    FabricMode fabric_mode = FabricMode::kReference;
};

std::vector<GridCell> grid_cells(const ExperimentConfig& config);

struct CellFailure {
    std::size_t cell = 0;
    std::string message;
};

struct Report {
    std::vector<MetricsRow> rows;
    std::vector<CellFailure> failures;
    std::string artifact_version;
    std::string config_digest;
    std::string started_at;  // ISO-8601 UTC; metadata only, kept out of the deterministic outputs
    std::vector<std::string> load_diagnostics;
};

/// Per-epoch plot data emitted by `hebgha train`.
struct EpochTraceRow {
    std::size_t epoch = 0;
    double delta_sum = 0.0;
    double seconds = 0.0;
    double reconstruction_error_pct = 0.0;
};

struct CellOutput {
    MetricsRow row;
    std::string model_json;
    std::vector<EpochTraceRow> epoch_trace;
    // Set for synthetic GHA cells: worst row alignment against the
    // spectral oracle of the training inputs.
    std::optional<double> min_row_alignment;
};

/// Loads the configured dataset (CSV or synthetic). CSV row-rejection
/// diagnostics are appended to `diagnostics` when given.
Dataset load_experiment_dataset(const ExperimentConfig& config, std::vector<std::string>* diagnostics = nullptr);

/// Runs one grid cell: split, standardize (CSV datasets only; synthetic
/// data keeps its planted spectrum), train, evaluate.
CellOutput run_cell(const ExperimentConfig& config, const Dataset& dataset, const GridCell& cell);

/// Runs the whole grid. Cells are independent; `jobs` > 1 runs them on a
/// small thread pool. Failing cells are reported and the rest still run.
Report run_experiment(const ExperimentConfig& config, std::size_t jobs = 1);

/// Fixed-header CSV, one MetricsRow per line, reals at full round-trip
/// precision. training_time_sec is the only wall-clock column.
std::string report_csv(const Report& report);

/// Human-readable table with percentages rendered to two decimals.
std::string report_markdown(const Report& report);

/// Parses a CSV produced by report_csv (for `hebgha report`).
Report parse_report_csv(const std::string& text);

std::string format_percent(double value);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hebgha
