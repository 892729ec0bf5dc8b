// hebgha: benchmark harness for the Hebbian / GHA laboratory.
//
// Subcommands:
//   bench     run the full experiment grid from a JSON config
//   train     run one grid cell, writing the model and a plot-ready trace
//   simulate  fabric-only multicast scenario with a packet trace
//   report    re-render a stored CSV report as markdown
//
// Exit codes: 0 success, 1 partial failures, 2 invalid config or usage.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hebgha/bench.hpp"

namespace {

namespace fs = std::filesystem;
using namespace hebgha;

struct BenchArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string formats = "csv,markdown";
    std::size_t jobs = 1;
};

struct TrainArgs {
    std::string config_path;
    std::size_t cell = 0;
    std::string out_dir = "out";
};

struct SimulateArgs {
    std::string topology = "3x3x1";
    std::string trace_path;
    std::size_t source = 0;
    std::string destinations;  // comma-separated core ids; empty = all cores
};

struct ReportArgs {
    std::string in_path;
    std::string format = "markdown";
    std::string out_path;
};

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

int run_bench(const BenchArgs& args) {
    const ExperimentConfig config = ExperimentConfig::from_json_file(args.config_path);
    const Report report = run_experiment(config, args.jobs);

    for (const std::string& diag : report.load_diagnostics) {
        std::cerr << "load: " << diag << '\n';
    }

    fs::create_directories(args.out_dir);
    for (const std::string& format : split_csv_list(args.formats)) {
        if (format == "csv") {
            const std::string path = (fs::path(args.out_dir) / "report.csv").string();
            write_text_file(path, report_csv(report));
            std::cout << "wrote " << path << '\n';
        } else if (format == "markdown") {
            const std::string path = (fs::path(args.out_dir) / "report.md").string();
            write_text_file(path, report_markdown(report));
            std::cout << "wrote " << path << '\n';
        } else {
            std::cerr << "unknown format: " << format << '\n';
            return 2;
        }
    }

    for (const CellFailure& f : report.failures) {
        std::cerr << "cell " << f.cell << " failed: " << f.message << '\n';
    }
    std::cout << report.rows.size() << " rows, " << report.failures.size() << " failures (run " << report.started_at << ", config " << report.config_digest << ")\n";
    return report.failures.empty() ? 0 : 1;
}

int run_train(const TrainArgs& args) {
    const ExperimentConfig config = ExperimentConfig::from_json_file(args.config_path);
    const std::vector<GridCell> cells = grid_cells(config);
    if (args.cell >= cells.size()) {
        std::cerr << "cell index " << args.cell << " out of range (grid has " << cells.size() << " cells)\n";
        return 2;
    }
    const Dataset dataset = load_experiment_dataset(config);
    const CellOutput out = run_cell(config, dataset, cells[args.cell]);

    fs::create_directories(args.out_dir);
    const std::string stem = "cell_" + std::to_string(args.cell);
    const std::string model_path = (fs::path(args.out_dir) / (stem + "_model.json")).string();
    write_text_file(model_path, out.model_json + "\n");

    std::ostringstream trace;
    trace << "epoch,delta_norm_sum,wall_seconds,reconstruction_error_pct\n";
    for (const EpochTraceRow& row : out.epoch_trace) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", row.epoch, row.delta_sum, row.seconds,
                      row.reconstruction_error_pct);
        trace << buf;
    }
    const std::string trace_path = (fs::path(args.out_dir) / (stem + "_trace.csv")).string();
    write_text_file(trace_path, trace.str());

    Report single;
    single.rows.push_back(out.row);
    std::cout << report_markdown(single);
    if (out.min_row_alignment) {
        std::cout << "min row alignment vs oracle: " << *out.min_row_alignment << '\n';
    }
    std::cout << "wrote " << model_path << " and " << trace_path << '\n';
    return 0;
}

int run_simulate(const SimulateArgs& args) {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t cores = 0;
    if (std::sscanf(args.topology.c_str(), "%zux%zux%zu", &width, &height, &cores) != 3) {
        std::cerr << "bad --topology, expected WxHxC (e.g. 3x3x1)\n";
        return 2;
    }
    const Topology topo = build_torus(width, height, cores);

    std::vector<CoreId> destinations;
    if (args.destinations.empty()) {
        for (CoreId c = 0; c < topo.core_count(); ++c) {
            destinations.push_back(c);
        }
    } else {
        for (const std::string& item : split_csv_list(args.destinations)) {
            destinations.push_back(std::stoull(item));
        }
    }

    FabricSimulator sim(topo);
    std::ofstream trace_file;
    if (!args.trace_path.empty()) {
        trace_file.open(args.trace_path);
        if (!trace_file) {
            std::cerr << "cannot open trace file: " << args.trace_path << '\n';
            return 2;
        }
        sim.set_trace(&trace_file);
    }

    program_multicast_routes(sim, args.source, destinations);
    const DeliveryReport report = inject_and_route(sim, AerPacket{static_cast<std::uint32_t>(args.source), {}, 0},
                                                   args.source);

    const EventStats& stats = sim.stats();
    std::cout << "topology " << width << "x" << height << "x" << cores << ", source core " << args.source << ", "
              << destinations.size() << " destination core(s)\n";
    std::cout << "deliveries " << report.deliveries.size() << ", link traversals " << stats.link_traversals
              << ", max hops " << stats.max_hops << ", dropped " << stats.dropped << '\n';
    std::cout << "energy estimate " << energy_estimate(stats.connection_events) << " J\n";
    if (!args.trace_path.empty()) {
        std::cout << "wrote " << args.trace_path << '\n';
    }
    return 0;
}

int run_report(const ReportArgs& args) {
    const Report report = parse_report_csv(read_text_file(args.in_path));
    std::string rendered;
    if (args.format == "markdown") {
        rendered = report_markdown(report);
    } else if (args.format == "csv") {
        rendered = report_csv(report);
    } else {
        std::cerr << "unknown format: " << args.format << '\n';
        return 2;
    }
    if (args.out_path.empty()) {
        std::cout << rendered;
    } else {
        write_text_file(args.out_path, rendered);
        std::cout << "wrote " << args.out_path << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hebbian / GHA benchmark harness"};
    app.require_subcommand(1);

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "run the full experiment grid");
    bench->add_option("--config", bench_args.config_path, "JSON experiment config")->required();
    bench->add_option("--out", bench_args.out_dir, "output directory");
    bench->add_option("--format", bench_args.formats, "comma-separated: csv,markdown");
    bench->add_option("--jobs", bench_args.jobs, "parallel grid cells");

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "run one grid cell, write model + trace");
    train->add_option("--config", train_args.config_path, "JSON experiment config")->required();
    train->add_option("--cell", train_args.cell, "flattened grid cell index")->required();
    train->add_option("--out", train_args.out_dir, "output directory");

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "fabric-only multicast scenario");
    simulate->add_option("--topology", sim_args.topology, "WxHxC, e.g. 3x3x18");
    simulate->add_option("--trace", sim_args.trace_path, "packet trace output file");
    simulate->add_option("--source", sim_args.source, "source core id");
    simulate->add_option("--dests", sim_args.destinations, "comma-separated destination cores (default: all)");

    ReportArgs report_args;
    CLI::App* report = app.add_subcommand("report", "re-render a stored CSV report");
    report->add_option("--in", report_args.in_path, "input report.csv")->required();
    report->add_option("--format", report_args.format, "markdown or csv");
    report->add_option("--out", report_args.out_path, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bench->parsed()) {
            return run_bench(bench_args);
        }
        if (train->parsed()) {
            return run_train(train_args);
        }
        if (simulate->parsed()) {
            return run_simulate(sim_args);
        }
        if (report->parsed()) {
            return run_report(report_args);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
