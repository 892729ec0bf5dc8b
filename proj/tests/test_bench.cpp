#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "hebgha/bench.hpp"

using namespace hebgha;

namespace {

const std::string kDataDir = HEBGHA_DATA_DIR;

std::string wine_config_json(const std::string& extra = "") {
    return std::string("{\"dataset_name\":\"Wine\",\"dataset_csv\":\"") + kDataDir +
           "wine.csv\",\"label_column\":\"class\"" + extra + "}";
}

// Blanks the wall-clock column so byte comparison sees only the
// deterministic fields.
std::string mask_time_column(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            out << line << '\n';
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        cells[5] = "MASKED";  // training_time_sec
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? "," : "") << cells[i];
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys and bad values") {
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("{\"unknown_key\": 1}"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("not json"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("{}"), ConfigError);  // no dataset
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(wine_config_json(",\"splits\":[1.5]")), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(wine_config_json(",\"algorithms\":[\"XXX\"]")), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(wine_config_json(",\"algorithms\":[]")), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(wine_config_json(",\"gha_eta0\":0.0")), ConfigError);
    // HA cannot run on an unlabeled synthetic spectrum.
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(
                        "{\"synthetic_samples\":100,\"synthetic_eigenvalues\":[2.0,1.0],\"algorithms\":[\"HA\"]}"),
                    ConfigError);
}

TEST_CASE("config defaults cover the standard split grid") {
    const ExperimentConfig cfg = ExperimentConfig::from_json_text(wine_config_json());
    CHECK(cfg.splits == std::vector<double>{0.7, 0.5, 0.8, 0.3});
    CHECK(cfg.algorithms.size() == 2);
    CHECK(cfg.fabric_modes.size() == 2);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{0});
    CHECK(cfg.gha_eta0 == 0.01);
}

TEST_CASE("grid cells enumerate algorithm, split, seed, fabric mode in order") {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(wine_config_json());
    cfg.splits = {0.7, 0.5};
    cfg.seeds = {0, 1};
    const std::vector<GridCell> cells = grid_cells(cfg);
    CHECK(cells.size() == 2 * 2 * 2 * 2);
    CHECK(cells[0].algorithm == Algorithm::kHebbian);
    CHECK(cells[0].split_fraction == 0.7);
    CHECK(cells[0].seed == 0);
    CHECK(cells[0].fabric_mode == FabricMode::kReference);
    CHECK(cells[1].fabric_mode == FabricMode::kSimulatedFabric);
    CHECK(cells[2].seed == 1);
    CHECK(cells[4].split_fraction == 0.5);
    CHECK(cells[8].algorithm == Algorithm::kGha);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(cells[i].index == i);
    }
}

TEST_CASE("run_experiment covers the grid and is deterministic after masking wall time") {
    const ExperimentConfig cfg = ExperimentConfig::from_json_text(
        wine_config_json(",\"algorithms\":[\"GHA\",\"HA\"],\"splits\":[0.7],\"gha_epochs\":10"
                         ",\"fabric_modes\":[\"reference\",\"simulated-fabric\"]"));
    const Report a = run_experiment(cfg);
    const Report b = run_experiment(cfg, 4);
    CHECK(a.failures.empty());
    CHECK(a.rows.size() == 4);
    CHECK(mask_time_column(report_csv(a)) == mask_time_column(report_csv(b)));

    // The simulated fabric trains bit-identically, so the deterministic
    // metric columns agree between modes.
    CHECK(a.rows[0].classification_accuracy == a.rows[1].classification_accuracy);
    CHECK(a.rows[0].error_rate == a.rows[1].error_rate);
    CHECK(!a.rows[0].energy_joules.has_value());
    REQUIRE(a.rows[1].energy_joules.has_value());
    CHECK(*a.rows[1].energy_joules > 0.0);
}

TEST_CASE("per-cell failures leave the rest of the grid running") {
    ExperimentConfig cfg = ExperimentConfig::from_json_text(
        wine_config_json(",\"splits\":[0.7],\"fabric_modes\":[\"reference\"],\"gha_epochs\":2"));
    cfg.gha_outputs = 13;  // violates M < N for the 13-dim Wine data
    const Report report = run_experiment(cfg);
    CHECK(report.rows.size() == 1);      // the HA cell
    CHECK(report.failures.size() == 1);  // the GHA cell
    CHECK(report.rows[0].algorithm == "HA");
}

TEST_CASE("csv report renders and parses back") {
    Report report;
    MetricsRow row;
    row.dataset = "Wine";
    row.algorithm = "GHA";
    row.fabric_mode = "reference";
    row.split_fraction = 0.7;
    row.error_rate = 45.651234567890123;
    row.training_time = 0.25;
    row.memory_usage = 440;
    row.avg_convergence_rate = 0.00199;
    row.classification_accuracy = 100.0 * 36.0 / 54.0;
    row.seed = 0;
    report.rows.push_back(row);
    row.fabric_mode = "simulated-fabric";
    row.energy_joules = 0.00403;
    report.rows.push_back(row);

    const std::string csv = report_csv(report);
    CHECK(csv.find("dataset,algorithm,fabric_mode,split_fraction,") == 0);
    CHECK(report_csv(report) == csv);  // pure function of the report

    const Report parsed = parse_report_csv(csv);
    REQUIRE(parsed.rows.size() == 2);
    CHECK(parsed.rows[0].dataset == "Wine");
    CHECK(parsed.rows[0].error_rate == report.rows[0].error_rate);
    CHECK(!parsed.rows[0].energy_joules.has_value());
    REQUIRE(parsed.rows[1].energy_joules.has_value());
    CHECK(*parsed.rows[1].energy_joules == 0.00403);
    CHECK(parsed.rows[1].classification_accuracy == report.rows[1].classification_accuracy);

    CHECK_THROWS_AS(parse_report_csv("bogus header\n"), LoadError);
}

TEST_CASE("markdown report prints percentages with two decimals") {
    Report report;
    MetricsRow row;
    row.dataset = "Wine";
    row.algorithm = "GHA";
    row.fabric_mode = "reference";
    row.split_fraction = 0.7;
    row.error_rate = 12.3456;
    row.classification_accuracy = 100.0 * 36.0 / 54.0;
    row.avg_convergence_rate = 0.5;
    row.memory_usage = 440;
    row.seed = 0;
    report.rows.push_back(row);

    const std::string md = report_markdown(report);
    CHECK(md.find("66.67") != std::string::npos);
    CHECK(md.find("12.35") != std::string::npos);
    CHECK(md.find("| - |") != std::string::npos);  // empty reference-mode energy column
    CHECK(report_markdown(report) == md);
}

TEST_CASE("synthetic grid cells expose oracle alignment side data") {
    const ExperimentConfig cfg = ExperimentConfig::from_json_text(
        "{\"synthetic_samples\":4000,\"synthetic_eigenvalues\":[8,4,2,1,0.5,0.25,0.125,0.0625],"
        "\"synthetic_seed\":1,\"algorithms\":[\"GHA\"],\"splits\":[0.7],\"fabric_modes\":[\"reference\"],"
        "\"gha_epochs\":60}");
    const Dataset ds = load_experiment_dataset(cfg);
    const std::vector<GridCell> cells = grid_cells(cfg);
    REQUIRE(cells.size() == 1);
    const CellOutput out = run_cell(cfg, ds, cells[0]);
    REQUIRE(out.min_row_alignment.has_value());
    CHECK(*out.min_row_alignment >= 0.99);
    CHECK(out.epoch_trace.size() == cfg.gha_epochs);
    CHECK(out.model_json.find("\"GHA\"") != std::string::npos);
}

TEST_CASE("train artifacts include the per-epoch trace for HA cells") {
    const ExperimentConfig cfg = ExperimentConfig::from_json_text(
        wine_config_json(",\"algorithms\":[\"HA\"],\"splits\":[0.7],\"fabric_modes\":[\"reference\"],"
                         "\"ha_epochs\":3"));
    const Dataset ds = load_experiment_dataset(cfg);
    const CellOutput out = run_cell(cfg, ds, grid_cells(cfg)[0]);
    CHECK(out.epoch_trace.size() == 3 * 3);  // per class per epoch
    CHECK(out.model_json.find("\"HA\"") != std::string::npos);
    CHECK(out.row.memory_usage == 440);
}
