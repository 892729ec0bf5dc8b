#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hebgha/bench.hpp"
#include "hebgha/data.hpp"
#include "hebgha/evaluation.hpp"
#include "hebgha/fabric.hpp"
#include "hebgha/learning.hpp"
#include "hebgha/spectral.hpp"

namespace py = pybind11;
using namespace hebgha;

namespace {

py::array_t<double> matrix_to_numpy(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    auto buf = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            buf(i, j) = m(i, j);
        }
    }
    return out;
}

Matrix numpy_to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) {
        throw py::value_error("expected a 2-dimensional array");
    }
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    auto buf = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) {
        for (py::ssize_t j = 0; j < a.shape(1); ++j) {
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = buf(i, j);
        }
    }
    return m;
}

WeightMatrix as_weights(const py::array_t<double, py::array::c_style | py::array::forcecast>& c) {
    Matrix m = numpy_to_matrix(c);
    return WeightMatrix::from_matrix(std::move(m), GhaDimContract::kOracleComparison);
}

GhaConfig make_config(double eta0, double tau, std::size_t epochs, std::uint64_t seed, double init_scale,
                      std::size_t samples_per_epoch) {
    GhaConfig cfg;
    cfg.eta0 = eta0;
    cfg.tau = tau > 0.0 ? tau : default_tau(samples_per_epoch, epochs);
    cfg.epochs = epochs;
    cfg.seed = Seed{seed};
    cfg.init_scale = init_scale;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_hebgha, m) {
    m.doc() = "Hebbian / GHA online-learning laboratory (C++ core)";

    py::register_exception<Error>(m, "HebghaError", PyExc_RuntimeError);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("name", &Dataset::name)
        .def_readonly("dim", &Dataset::dim)
        .def_readonly("classes", &Dataset::classes)
        .def_readonly("provenance", &Dataset::provenance)
        .def_property_readonly("size", [](const Dataset& ds) { return ds.samples.size(); })
        .def_property_readonly("features",
                               [](const Dataset& ds) {
                                   py::array_t<double> out({ds.samples.size(), ds.dim});
                                   auto buf = out.mutable_unchecked<2>();
                                   for (std::size_t i = 0; i < ds.samples.size(); ++i) {
                                       for (std::size_t j = 0; j < ds.dim; ++j) {
                                           buf(i, j) = ds.samples[i].features[j];
                                       }
                                   }
                                   return out;
                               })
        .def_property_readonly("labels",
                               [](const Dataset& ds) {
                                   py::array_t<int> out(ds.samples.size());
                                   auto buf = out.mutable_unchecked<1>();
                                   for (std::size_t i = 0; i < ds.samples.size(); ++i) {
                                       buf(i) = ds.samples[i].label;
                                   }
                                   return out;
                               })
        .def_property_readonly("planted_basis",
                               [](const Dataset& ds) -> py::object {
                                   if (!ds.planted_basis) {
                                       return py::none();
                                   }
                                   return matrix_to_numpy(*ds.planted_basis);
                               })
        .def_property_readonly("planted_spectrum", [](const Dataset& ds) -> py::object {
            if (!ds.planted_spectrum) {
                return py::none();
            }
            return py::cast(*ds.planted_spectrum);
        });

    py::class_<Topology>(m, "Topology")
        .def_readonly("width", &Topology::width)
        .def_readonly("height", &Topology::height)
        .def_readonly("cores_per_node", &Topology::cores_per_node)
        .def_property_readonly("node_count", &Topology::node_count)
        .def_property_readonly("core_count", &Topology::core_count);

    m.def("seeded_uniform_matrix",
          [](std::size_t rows, std::size_t cols, double lo, double hi, std::uint64_t seed) {
              return matrix_to_numpy(seeded_uniform_matrix(rows, cols, lo, hi, Seed{seed}));
          },
          py::arg("rows"), py::arg("cols"), py::arg("lo"), py::arg("hi"), py::arg("seed"));

    m.def("frobenius_delta",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
              return frobenius_delta(numpy_to_matrix(a), numpy_to_matrix(b));
          },
          py::arg("a"), py::arg("b"));

    m.def("hebbian_train",
          [](const std::vector<std::pair<Vector, double>>& pairs, std::size_t epochs) {
              if (pairs.empty()) {
                  throw EmptyDatasetError("hebbian_train: empty pair sequence");
              }
              auto [model, trace] = hebbian_train(hebbian_init(pairs.front().first.size()), pairs, epochs);
              return py::make_tuple(model.weights, model.bias, avg_convergence_rate(trace));
          },
          py::arg("pairs"), py::arg("epochs") = 1,
          "Trains a zero-initialized Hebbian unit; returns (weights, bias, avg_convergence_rate).");

    m.def("gha_step",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& c, const Vector& x, double eta) {
              return matrix_to_numpy(gha_step(as_weights(c), x, eta).c);
          },
          py::arg("c"), py::arg("x"), py::arg("eta"));

    m.def("gha_output",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& c, const Vector& x) {
              return gha_output(as_weights(c), x);
          },
          py::arg("c"), py::arg("x"));

    m.def("lower_triangular_of",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
              return matrix_to_numpy(lower_triangular_of(numpy_to_matrix(a)));
          },
          py::arg("a"));

    m.def("gha_train",
          [](const std::vector<Vector>& inputs, std::size_t m_outputs, double eta0, double tau, std::size_t epochs,
             std::uint64_t seed, double init_scale) {
              const GhaConfig cfg = make_config(eta0, tau, epochs, seed, init_scale, inputs.size());
              const std::size_t n = inputs.empty() ? 0 : inputs.front().size();
              const WeightMatrix init = gha_init(
                  m_outputs, n, cfg, m_outputs < n ? GhaDimContract::kReduce : GhaDimContract::kOracleComparison);
              auto [trained, trace] = gha_train(init, inputs, cfg);
              return py::make_tuple(matrix_to_numpy(trained.c), avg_convergence_rate(trace));
          },
          py::arg("inputs"), py::arg("m"), py::arg("eta0") = 0.01, py::arg("tau") = 0.0, py::arg("epochs") = 50,
          py::arg("seed") = 0, py::arg("init_scale") = 0.01,
          "Initializes and trains GHA; returns (C, avg_convergence_rate).");

    m.def("autocorrelation", [](const std::vector<Vector>& inputs) { return matrix_to_numpy(autocorrelation(inputs).q); },
          py::arg("inputs"));

    m.def("jacobi_eigendecompose",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& q) {
              const EigenBasis basis = jacobi_eigendecompose(numpy_to_matrix(q));
              return py::make_tuple(basis.eigenvalues, matrix_to_numpy(basis.eigenvectors));
          },
          py::arg("q"), "Returns (eigenvalues_descending, eigenvector_rows).");

    m.def("row_alignment",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& c,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& eigenvector_rows,
             const Vector& eigenvalues) {
              EigenBasis basis{eigenvalues, numpy_to_matrix(eigenvector_rows)};
              return row_alignment(as_weights(c), basis).values;
          },
          py::arg("c"), py::arg("eigenvector_rows"), py::arg("eigenvalues"));

    m.def("reconstruction_error",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& c,
             const std::vector<Vector>& inputs) { return reconstruction_error(as_weights(c), inputs); },
          py::arg("c"), py::arg("inputs"));

    m.def("component_variances",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& c,
             const std::vector<Vector>& inputs) { return component_variances(as_weights(c), inputs); },
          py::arg("c"), py::arg("inputs"));

    m.def("load_csv",
          [](const std::string& path, const py::object& label_column, bool has_header) {
              LabelColumn col;
              if (py::isinstance<py::str>(label_column)) {
                  col = label_column.cast<std::string>();
              } else {
                  col = label_column.cast<std::size_t>();
              }
              return load_csv(path, col, has_header);
          },
          py::arg("path"), py::arg("label_column"), py::arg("has_header") = true);

    m.def("split",
          [](const Dataset& ds, double train_fraction, std::uint64_t seed) {
              auto [train, test] = split(ds, SplitSpec{train_fraction, Seed{seed}});
              return py::make_tuple(std::move(train), std::move(test));
          },
          py::arg("dataset"), py::arg("train_fraction"), py::arg("seed") = 0);

    m.def("standardize",
          [](const Dataset& train, const Dataset& test) {
              StandardizeResult r = standardize(train, test);
              return py::make_tuple(std::move(r.train), std::move(r.test));
          },
          py::arg("train"), py::arg("test"));

    m.def("synth_gaussian",
          [](std::size_t n_samples, const Vector& eigenvalues, std::uint64_t seed) {
              return synth_gaussian(n_samples, eigenvalues, Seed{seed});
          },
          py::arg("n_samples"), py::arg("eigenvalues"), py::arg("seed") = 1);

    m.def("accuracy", &accuracy, py::arg("predictions"), py::arg("labels"));
    m.def("energy_estimate", &energy_estimate, py::arg("connection_events"));
    m.def("memory_estimate",
          [](const std::string& algorithm, std::size_t m_outputs, std::size_t n, std::size_t classes) {
              return memory_estimate(algorithm == "HA" ? Algorithm::kHebbian : Algorithm::kGha, m_outputs, n,
                                     classes);
          },
          py::arg("algorithm"), py::arg("m"), py::arg("n"), py::arg("classes"));

    m.def("build_torus", &build_torus, py::arg("width"), py::arg("height"), py::arg("cores_per_node"));
    m.def("shortest_hops", &shortest_hops, py::arg("topology"), py::arg("a"), py::arg("b"));

    m.def("multicast_deliveries",
          [](const Topology& topo, std::size_t source, const std::vector<std::size_t>& destinations) {
              FabricSimulator sim(topo);
              program_multicast_routes(sim, source, destinations);
              const DeliveryReport report =
                  inject_and_route(sim, AerPacket{static_cast<std::uint32_t>(source), {}, 0}, source);
              std::vector<std::tuple<std::size_t, std::uint64_t, std::size_t>> out;
              out.reserve(report.deliveries.size());
              for (const Delivery& d : report.deliveries) {
                  out.emplace_back(d.core, d.arrival_tick, d.hops);
              }
              return out;
          },
          py::arg("topology"), py::arg("source"), py::arg("destinations"),
          "Programs a multicast route, injects one packet, returns (core, tick, hops) per delivery.");

    m.def("run_distributed_gha",
          [](const std::vector<Vector>& inputs, std::size_t m_outputs, const Topology& topo, double eta0, double tau,
             std::size_t epochs, std::uint64_t seed, double init_scale) {
              const GhaConfig cfg = make_config(eta0, tau, epochs, seed, init_scale, inputs.size());
              const DistributedGhaResult result = run_distributed_gha(inputs, cfg, topo, m_outputs);
              return py::make_tuple(matrix_to_numpy(result.weights.c), result.stats.connection_events);
          },
          py::arg("inputs"), py::arg("m"), py::arg("topology"), py::arg("eta0") = 0.01, py::arg("tau") = 0.0,
          py::arg("epochs") = 1, py::arg("seed") = 0, py::arg("init_scale") = 0.01,
          "Runs GHA on the simulated fabric; returns (C, connection_events).");

    m.def("run_experiment_json",
          [](const std::string& config_json, std::size_t jobs) {
              const Report report = run_experiment(ExperimentConfig::from_json_text(config_json), jobs);
              return py::make_tuple(report_csv(report), report_markdown(report), report.failures.size());
          },
          py::arg("config_json"), py::arg("jobs") = 1,
          "Runs the benchmark grid from a JSON config string; returns (csv, markdown, failure_count).");
}
