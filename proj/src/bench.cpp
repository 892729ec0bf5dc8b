#include "hebgha/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hebgha/spectral.hpp"

namespace hebgha {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kArtifactVersion = "0.1.0";

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::string fabric_mode_name(FabricMode mode) {
    return mode == FabricMode::kReference ? "reference" : "simulated-fabric";
}

std::string format_percent(double value) {
    return format_fixed(value, 2);
}

void ExperimentConfig::validate() const {
    const bool has_csv = dataset_csv.has_value();
    const bool has_synth = synthetic.has_value();
    if (has_csv == has_synth) {
        throw ConfigError("config: exactly one of dataset_csv or synthetic_samples/synthetic_eigenvalues required");
    }
    if (algorithms.empty()) {
        throw ConfigError("config: at least one algorithm required");
    }
    if (splits.empty()) {
        throw ConfigError("config: at least one split required");
    }
    if (seeds.empty()) {
        throw ConfigError("config: at least one seed required");
    }
    if (fabric_modes.empty()) {
        throw ConfigError("config: at least one fabric mode required");
    }
    for (const double f : splits) {
        if (!(f > 0.0 && f < 1.0)) {
            throw ConfigError("config: splits must lie in (0, 1)");
        }
    }
    if (has_synth) {
        for (const Algorithm a : algorithms) {
            if (a == Algorithm::kHebbian) {
                throw ConfigError("config: HA needs a labeled multi-class dataset, not a synthetic spectrum");
            }
        }
        if (synthetic->samples < 2) {
            throw ConfigError("config: synthetic_samples must be >= 2");
        }
        if (synthetic->eigenvalues.empty()) {
            throw ConfigError("config: synthetic_eigenvalues must be non-empty");
        }
    }
    if (gha_outputs == 0) {
        throw ConfigError("config: gha_outputs must be >= 1");
    }
    if (!(gha_eta0 > 0.0)) {
        throw ConfigError("config: gha_eta0 must be > 0");
    }
    if (gha_tau < 0.0) {
        throw ConfigError("config: gha_tau must be >= 0 (0 selects the default)");
    }
    if (gha_epochs == 0 || ha_epochs == 0) {
        throw ConfigError("config: epochs must be >= 1");
    }
    if (!(gha_init_scale > 0.0)) {
        throw ConfigError("config: gha_init_scale must be > 0");
    }
    if (fabric_width == 0 || fabric_height == 0 || fabric_cores == 0) {
        throw ConfigError("config: fabric dimensions must be >= 1");
    }
}

namespace {

const std::vector<std::string> kKnownKeys = {
    "dataset_name",   "dataset_csv",        "label_column",    "has_header",   "synthetic_samples",
    "synthetic_eigenvalues", "synthetic_seed", "algorithms",   "splits",       "seeds",
    "gha_outputs",    "gha_eta0",           "gha_tau",         "gha_epochs",   "gha_init_scale",
    "ha_epochs",      "fabric_modes",       "fabric_width",    "fabric_height", "fabric_cores",
};

Algorithm parse_algorithm(const std::string& name) {
    if (name == "HA") {
        return Algorithm::kHebbian;
    }
    if (name == "GHA") {
        return Algorithm::kGha;
    }
    throw ConfigError("config: unknown algorithm '" + name + "' (expected HA or GHA)");
}

FabricMode parse_fabric_mode(const std::string& name) {
    if (name == "reference") {
        return FabricMode::kReference;
    }
    if (name == "simulated-fabric") {
        return FabricMode::kSimulatedFabric;
    }
    throw ConfigError("config: unknown fabric mode '" + name + "' (expected reference or simulated-fabric)");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config: top-level JSON value must be an object");
    }
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }

    ExperimentConfig cfg;
    try {
        if (doc.contains("dataset_name")) {
            cfg.dataset_name = doc["dataset_name"].get<std::string>();
        }
        if (doc.contains("dataset_csv")) {
            cfg.dataset_csv = doc["dataset_csv"].get<std::string>();
        }
        if (doc.contains("label_column")) {
            if (doc["label_column"].is_string()) {
                cfg.label_column = doc["label_column"].get<std::string>();
            } else {
                cfg.label_column = doc["label_column"].get<std::size_t>();
            }
        }
        if (doc.contains("has_header")) {
            cfg.has_header = doc["has_header"].get<bool>();
        }
        if (doc.contains("synthetic_samples") || doc.contains("synthetic_eigenvalues")) {
            SyntheticSpec spec;
            spec.samples = doc.at("synthetic_samples").get<std::size_t>();
            spec.eigenvalues = doc.at("synthetic_eigenvalues").get<Vector>();
            spec.seed = Seed{doc.value("synthetic_seed", std::uint64_t{1})};
            cfg.synthetic = std::move(spec);
        }
        if (doc.contains("algorithms")) {
            cfg.algorithms.clear();
            for (const auto& a : doc["algorithms"]) {
                cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
            }
        }
        if (doc.contains("splits")) {
            cfg.splits = doc["splits"].get<std::vector<double>>();
        }
        if (doc.contains("seeds")) {
            cfg.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
        }
        if (doc.contains("gha_outputs")) {
            cfg.gha_outputs = doc["gha_outputs"].get<std::size_t>();
        }
        if (doc.contains("gha_eta0")) {
            cfg.gha_eta0 = doc["gha_eta0"].get<double>();
        }
        if (doc.contains("gha_tau")) {
            cfg.gha_tau = doc["gha_tau"].get<double>();
        }
        if (doc.contains("gha_epochs")) {
            cfg.gha_epochs = doc["gha_epochs"].get<std::size_t>();
        }
        if (doc.contains("gha_init_scale")) {
            cfg.gha_init_scale = doc["gha_init_scale"].get<double>();
        }
        if (doc.contains("ha_epochs")) {
            cfg.ha_epochs = doc["ha_epochs"].get<std::size_t>();
        }
        if (doc.contains("fabric_modes")) {
            cfg.fabric_modes.clear();
            for (const auto& m : doc["fabric_modes"]) {
                cfg.fabric_modes.push_back(parse_fabric_mode(m.get<std::string>()));
            }
        }
        if (doc.contains("fabric_width")) {
            cfg.fabric_width = doc["fabric_width"].get<std::size_t>();
        }
        if (doc.contains("fabric_height")) {
            cfg.fabric_height = doc["fabric_height"].get<std::size_t>();
        }
        if (doc.contains("fabric_cores")) {
            cfg.fabric_cores = doc["fabric_cores"].get<std::size_t>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad value type: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    return from_json_text(read_text_file(path));
}

std::vector<GridCell> grid_cells(const ExperimentConfig& config) {
    std::vector<GridCell> cells;
    std::size_t index = 0;
    for (const Algorithm a : config.algorithms) {
        for (const double f : config.splits) {
            for (const std::uint64_t s : config.seeds) {
                for (const FabricMode m : config.fabric_modes) {
                    cells.push_back({index++, a, f, s, m});
                }
            }
        }
    }
    return cells;
}

Dataset load_experiment_dataset(const ExperimentConfig& config, std::vector<std::string>* diagnostics) {
    Dataset ds;
    if (config.dataset_csv) {
        ds = load_csv(*config.dataset_csv, config.label_column, config.has_header, diagnostics);
    } else {
        ds = synth_gaussian(config.synthetic->samples, config.synthetic->eigenvalues, config.synthetic->seed);
    }
    if (!config.dataset_name.empty()) {
        ds.name = config.dataset_name;
    }
    return ds;
}

namespace {

std::string gha_model_json(const WeightMatrix& cw) {
    json doc;
    doc["algorithm"] = "GHA";
    doc["m"] = cw.m_outputs;
    doc["n"] = cw.n_inputs;
    json rows = json::array();
    for (std::size_t i = 0; i < cw.m_outputs; ++i) {
        const auto r = cw.c.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2);
}

std::string hebbian_model_json(const MulticlassHebbian& model) {
    json doc;
    doc["algorithm"] = "HA";
    doc["classes"] = model.classes;
    doc["n"] = model.models.empty() ? 0 : model.models.front().n_inputs;
    json models = json::array();
    for (const HebbianModel& m : model.models) {
        models.push_back(json{{"weights", m.weights}, {"bias", m.bias}});
    }
    doc["models"] = std::move(models);
    return doc.dump(2);
}

CellOutput run_gha_cell(const ExperimentConfig& config, const Dataset& train, const Dataset& test,
                        const GridCell& cell) {
    const std::size_t n = train.dim;
    const std::size_t m = config.gha_outputs;
    if (m >= n) {
        throw ValueError("dimension contract: gha_outputs must be < dataset dimension");
    }
    const std::vector<Vector> inputs = train.feature_vectors();
    GhaConfig gha_cfg;
    gha_cfg.eta0 = config.gha_eta0;
    gha_cfg.tau = config.gha_tau > 0.0 ? config.gha_tau : default_tau(inputs.size(), config.gha_epochs);
    gha_cfg.epochs = config.gha_epochs;
    gha_cfg.seed = Seed{cell.seed}.derive(2);
    gha_cfg.init_scale = config.gha_init_scale;

    CellOutput out;
    std::vector<EpochTraceRow> epoch_trace;
    WeightMatrix trained{0, 0, Matrix()};
    TrainingTrace trace;
    std::optional<EventStats> stats;

    const auto start = Clock::now();
    if (cell.fabric_mode == FabricMode::kReference) {
        const WeightMatrix init = gha_init(m, n, gha_cfg);
        auto [w, tr] = gha_train(init, inputs, gha_cfg, [&](std::size_t epoch, const WeightMatrix& cw) {
            epoch_trace.push_back({epoch, 0.0, 0.0, reconstruction_error(cw, inputs)});
        });
        trained = std::move(w);
        trace = std::move(tr);
    } else {
        const Topology topo = build_torus(config.fabric_width, config.fabric_height, config.fabric_cores);
        auto result = run_distributed_gha(inputs, gha_cfg, topo, m);
        trained = std::move(result.weights);
        trace = std::move(result.trace);
        stats = result.stats;
        const double recon = reconstruction_error(trained, inputs);
        for (const auto& e : trace.epochs) {
            epoch_trace.push_back({e.epoch, 0.0, 0.0, recon});
        }
    }
    const double train_seconds = std::chrono::duration<double>(Clock::now() - start).count();

    for (std::size_t i = 0; i < trace.epochs.size() && i < epoch_trace.size(); ++i) {
        epoch_trace[i].delta_sum = trace.epochs[i].delta_sum;
        epoch_trace[i].seconds = trace.epochs[i].seconds;
    }

    // Nearest-centroid readout in projected space.
    std::vector<std::pair<Vector, int>> projected;
    projected.reserve(train.samples.size());
    for (const LabeledSample& s : train.samples) {
        projected.emplace_back(gha_output(trained, s.features), s.label);
    }
    const CentroidClassifier cc = fit_centroids(projected, train.classes);
    std::vector<int> predictions;
    predictions.reserve(test.samples.size());
    for (const LabeledSample& s : test.samples) {
        predictions.push_back(nearest_centroid_classify(cc, gha_output(trained, s.features)));
    }

    MetricsRow row;
    row.dataset = train.name;
    row.algorithm = algorithm_name(Algorithm::kGha);
    row.fabric_mode = fabric_mode_name(cell.fabric_mode);
    row.split_fraction = cell.split_fraction;
    row.error_rate = reconstruction_error(trained, test.feature_vectors());
    row.training_time = train_seconds;
    row.memory_usage = memory_estimate(Algorithm::kGha, m, n, train.classes);
    row.avg_convergence_rate = avg_convergence_rate(trace);
    row.classification_accuracy = accuracy(predictions, test.labels());
    if (stats) {
        row.energy_joules = energy_estimate(stats->connection_events);
    }
    row.seed = cell.seed;

    if (train.planted_basis.has_value()) {
        const EigenBasis oracle = jacobi_eigendecompose(autocorrelation(inputs));
        const RowAlignment alignment = row_alignment(trained, oracle);
        double worst = 1.0;
        for (const double a : alignment.values) {
            worst = std::min(worst, a);
        }
        out.min_row_alignment = worst;
    }

    out.row = std::move(row);
    out.model_json = gha_model_json(trained);
    out.epoch_trace = std::move(epoch_trace);
    return out;
}

CellOutput run_hebbian_cell(const ExperimentConfig& config, const Dataset& train, const Dataset& test,
                            const GridCell& cell) {
    MulticlassHebbian model;
    TrainingTrace trace;
    std::optional<EventStats> stats;

    const auto start = Clock::now();
    if (cell.fabric_mode == FabricMode::kReference) {
        auto [m, tr] = train_multiclass_hebbian(train, config.ha_epochs);
        model = std::move(m);
        trace = std::move(tr);
    } else {
        const Topology topo = build_torus(config.fabric_width, config.fabric_height, config.fabric_cores);
        auto result = run_distributed_hebbian(train.feature_vectors(), train.labels(), train.classes,
                                              config.ha_epochs, topo);
        model.classes = train.classes;
        model.models = std::move(result.models);
        trace = std::move(result.trace);
        stats = result.stats;
    }
    const double train_seconds = std::chrono::duration<double>(Clock::now() - start).count();

    std::vector<int> predictions;
    predictions.reserve(test.samples.size());
    for (const LabeledSample& s : test.samples) {
        predictions.push_back(hebbian_classify(model, s.features));
    }

    MetricsRow row;
    row.dataset = train.name;
    row.algorithm = algorithm_name(Algorithm::kHebbian);
    row.fabric_mode = fabric_mode_name(cell.fabric_mode);
    row.split_fraction = cell.split_fraction;
    row.error_rate = hebbian_error_rate(model, test);
    row.training_time = train_seconds;
    row.memory_usage = memory_estimate(Algorithm::kHebbian, 0, train.dim, train.classes);
    row.avg_convergence_rate = avg_convergence_rate(trace);
    row.classification_accuracy = accuracy(predictions, test.labels());
    if (stats) {
        row.energy_joules = energy_estimate(stats->connection_events);
    }
    row.seed = cell.seed;

    CellOutput out;
    out.row = std::move(row);
    out.model_json = hebbian_model_json(model);
    // The Hebbian code direction never changes across epochs (updates are
    // additive and epoch-scaling is uniform), so the per-epoch
    // reconstruction column is the trained value throughout.
    const double recon = out.row.error_rate;
    for (const auto& e : trace.epochs) {
        out.epoch_trace.push_back({e.epoch, e.delta_sum, e.seconds, recon});
    }
    return out;
}

}  // namespace

CellOutput run_cell(const ExperimentConfig& config, const Dataset& dataset, const GridCell& cell) {
    SplitSpec spec{cell.split_fraction, Seed{cell.seed}.derive(1)};
    auto [train_raw, test_raw] = split(dataset, spec);

    Dataset train;
    Dataset test;
    if (dataset.planted_basis.has_value()) {
        // Synthetic data is already zero-mean with a designed spectrum;
        // standardizing would erase it.
        train = std::move(train_raw);
        test = std::move(test_raw);
        train.planted_basis = dataset.planted_basis;
        train.planted_spectrum = dataset.planted_spectrum;
    } else {
        StandardizeResult st = standardize(train_raw, test_raw);
        train = std::move(st.train);
        test = std::move(st.test);
    }

    if (cell.algorithm == Algorithm::kGha) {
        return run_gha_cell(config, train, test, cell);
    }
    return run_hebbian_cell(config, train, test, cell);
}

Report run_experiment(const ExperimentConfig& config, std::size_t jobs) {
    config.validate();
    Report report;
    report.artifact_version = kArtifactVersion;
    {
        const std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        report.started_at = stamp;
    }

    Dataset dataset = load_experiment_dataset(config, &report.load_diagnostics);

    const std::vector<GridCell> cells = grid_cells(config);
    std::vector<std::optional<MetricsRow>> rows(cells.size());
    std::vector<std::optional<CellFailure>> failures(cells.size());

    const auto work = [&](const GridCell& cell) {
        try {
            rows[cell.index] = run_cell(config, dataset, cell).row;
        } catch (const std::exception& e) {
            failures[cell.index] = CellFailure{cell.index, e.what()};
        }
    };

    if (jobs <= 1 || cells.size() <= 1) {
        for (const GridCell& cell : cells) {
            work(cell);
        }
    } else {
        std::atomic<std::size_t> next{0};
        const std::size_t workers = std::min(jobs, cells.size());
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) {
                        return;
                    }
                    work(cells[i]);
                }
            });
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }

    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (rows[i]) {
            report.rows.push_back(std::move(*rows[i]));
        }
        if (failures[i]) {
            report.failures.push_back(std::move(*failures[i]));
        }
    }

    std::ostringstream digest_src;
    digest_src << dataset.provenance << '|' << cells.size();
    char digest[32];
    std::snprintf(digest, sizeof(digest), "%016" PRIx64, fnv1a(digest_src.str()));
    report.config_digest = digest;
    return report;
}

namespace {

constexpr const char* kCsvHeader =
    "dataset,algorithm,fabric_mode,split_fraction,error_rate_pct,training_time_sec,memory_usage_bytes,"
    "avg_convergence_rate,classification_accuracy_pct,energy_joules,seed";

}  // namespace

std::string report_csv(const Report& report) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const MetricsRow& r : report.rows) {
        out << r.dataset << ',' << r.algorithm << ',' << r.fabric_mode << ',' << format_real(r.split_fraction) << ','
            << format_real(r.error_rate) << ',' << format_real(r.training_time) << ',' << r.memory_usage << ','
            << format_real(r.avg_convergence_rate) << ',' << format_real(r.classification_accuracy) << ','
            << (r.energy_joules ? format_real(*r.energy_joules) : std::string()) << ',' << r.seed << '\n';
    }
    return out.str();
}

std::string report_markdown(const Report& report) {
    std::ostringstream out;
    out << "| Dataset | Algorithm | Fabric | Split | Error Rate (%) | Accuracy (%) | Avg Conv. Rate | "
           "Training Time (sec) | Memory (bytes) | Energy (J) | Seed |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const MetricsRow& r : report.rows) {
        out << "| " << r.dataset << " | " << r.algorithm << " | " << r.fabric_mode << " | "
            << format_fixed(r.split_fraction, 2) << " | " << format_percent(r.error_rate) << " | "
            << format_percent(r.classification_accuracy) << " | " << format_fixed(r.avg_convergence_rate, 5) << " | "
            << format_fixed(r.training_time, 2) << " | " << r.memory_usage << " | "
            << (r.energy_joules ? format_fixed(*r.energy_joules, 6) : std::string("-")) << " | " << r.seed
            << " |\n";
    }
    if (!report.failures.empty()) {
        out << '\n';
        for (const CellFailure& f : report.failures) {
            out << "- cell " << f.cell << " failed: " << f.message << '\n';
        }
    }
    out << "\nartifact " << (report.artifact_version.empty() ? kArtifactVersion : report.artifact_version);
    if (!report.config_digest.empty()) {
        out << ", config " << report.config_digest;
    }
    out << ", rows " << report.rows.size() << '\n';
    return out.str();
}

Report parse_report_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw LoadError("report CSV: empty input");
    }
    if (line != kCsvHeader) {
        throw LoadError("report CSV: unrecognized header");
    }
    Report report;
    report.artifact_version = kArtifactVersion;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (line.back() == ',') {
            cells.push_back("");
        }
        if (cells.size() != 11) {
            throw LoadError("report CSV: line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " cells, expected 11");
        }
        MetricsRow r;
        r.dataset = cells[0];
        r.algorithm = cells[1];
        r.fabric_mode = cells[2];
        r.split_fraction = std::stod(cells[3]);
        r.error_rate = std::stod(cells[4]);
        r.training_time = std::stod(cells[5]);
        r.memory_usage = std::stoull(cells[6]);
        r.avg_convergence_rate = std::stod(cells[7]);
        r.classification_accuracy = std::stod(cells[8]);
        if (!cells[9].empty()) {
            r.energy_joules = std::stod(cells[9]);
        }
        r.seed = std::stoull(cells[10]);
        report.rows.push_back(std::move(r));
    }
    return report;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << content;
    if (!out) {
        throw IoError("write failure: " + path);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hebgha
