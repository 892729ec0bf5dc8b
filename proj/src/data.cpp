#include "hebgha/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace hebgha {

std::vector<Vector> Dataset::feature_vectors() const {
    std::vector<Vector> out;
    out.reserve(samples.size());
    for (const LabeledSample& s : samples) {
        out.push_back(s.features);
    }
    return out;
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(samples.size());
    for (const LabeledSample& s : samples) {
        out.push_back(s.label);
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.push_back("");
    }
    return cells;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) {
        return false;
    }
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

std::string basename_of(const std::string& path) {
    const auto pos = path.find_last_of("/\\");
    std::string base = pos == std::string::npos ? path : path.substr(pos + 1);
    const auto dotpos = base.find_last_of('.');
    if (dotpos != std::string::npos && dotpos > 0) {
        base = base.substr(0, dotpos);
    }
    return base;
}

}  // namespace

Dataset load_csv(const std::string& path, const LabelColumn& label_column, bool has_header,
                 std::vector<std::string>* diagnostics) {
    std::ifstream in(path);
    if (!in) {
        throw LoadError("missing file: " + path);
    }

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    if (has_header) {
        if (!std::getline(in, line)) {
            throw LoadError("zero usable rows: " + path);
        }
        ++line_no;
        header = split_line(line);
    }

    std::size_t label_index = 0;
    if (std::holds_alternative<std::size_t>(label_column)) {
        label_index = std::get<std::size_t>(label_column);
    } else {
        const std::string& name = std::get<std::string>(label_column);
        if (!has_header) {
            throw LoadError("missing label column: name lookup '" + name + "' requires a header row");
        }
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw LoadError("missing label column: '" + name + "' not in header");
        }
        label_index = static_cast<std::size_t>(it - header.begin());
    }
    if (has_header && label_index >= header.size()) {
        throw LoadError("missing label column: index " + std::to_string(label_index) +
                        " out of range for " + std::to_string(header.size()) + " columns");
    }

    Dataset ds;
    ds.name = basename_of(path);
    ds.provenance = path;

    std::map<std::string, int> label_ids;  // first-appearance order kept separately
    int next_id = 0;
    std::size_t n_columns = has_header ? header.size() : 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const std::vector<std::string> cells = split_line(line);
        if (n_columns == 0) {
            n_columns = cells.size();
            if (label_index >= n_columns) {
                throw LoadError("missing label column: index " + std::to_string(label_index) +
                                " out of range for " + std::to_string(n_columns) + " columns");
            }
        }
        if (cells.size() != n_columns) {
            throw LoadError("ragged row: line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " + std::to_string(n_columns));
        }

        Vector features;
        features.reserve(n_columns - 1);
        bool ok = true;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == label_index) {
                continue;
            }
            double v = 0.0;
            if (!parse_double(cells[i], v)) {
                if (diagnostics) {
                    diagnostics->push_back("line " + std::to_string(line_no) + ": non-numeric feature cell '" +
                                           cells[i] + "'");
                }
                ok = false;
                break;
            }
            features.push_back(v);
        }
        if (!ok) {
            continue;
        }

        const std::string& raw_label = cells[label_index];
        auto it = label_ids.find(raw_label);
        if (it == label_ids.end()) {
            it = label_ids.emplace(raw_label, next_id++).first;
        }
        ds.samples.push_back({std::move(features), it->second});
    }

    if (ds.samples.empty()) {
        throw LoadError("zero usable rows: " + path);
    }
    ds.dim = ds.samples.front().features.size();
    ds.classes = static_cast<std::size_t>(next_id);
    return ds;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw ValueError("invalid split: train_fraction must be in (0, 1)");
    }
    const std::size_t n = ds.samples.size();
    const std::size_t n_train = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n) {
        throw ValueError("invalid split: both parts must be non-empty");
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(spec.seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = rng.bounded(i + 1);
        std::swap(idx[i], idx[j]);
    }

    Dataset train;
    Dataset test;
    train.name = ds.name;
    test.name = ds.name;
    train.dim = ds.dim;
    test.dim = ds.dim;
    train.classes = ds.classes;
    test.classes = ds.classes;
    train.provenance = ds.provenance + " [train " + std::to_string(spec.train_fraction) + "]";
    test.provenance = ds.provenance + " [test " + std::to_string(1.0 - spec.train_fraction) + "]";
    train.samples.reserve(n_train);
    test.samples.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i) {
        (i < n_train ? train : test).samples.push_back(ds.samples[idx[i]]);
    }
    return {std::move(train), std::move(test)};
}

Vector Standardizer::apply(const Vector& x) const {
    if (x.size() != mean.size()) {
        throw ShapeError("Standardizer::apply: dimension mismatch");
    }
    Vector out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        out[j] = degenerate[j] ? 0.0 : (x[j] - mean[j]) / stddev[j];
    }
    return out;
}

StandardizeResult standardize(const Dataset& train, const Dataset& test) {
    if (train.dim != test.dim) {
        throw ShapeError("standardize: train and test dimensions differ");
    }
    const std::size_t dim = train.dim;
    const std::size_t n = train.samples.size();
    if (n == 0) {
        throw EmptyDatasetError("standardize: empty training set");
    }

    Standardizer st;
    st.mean.assign(dim, 0.0);
    st.stddev.assign(dim, 0.0);
    st.degenerate.assign(dim, 0);
    for (const LabeledSample& s : train.samples) {
        for (std::size_t j = 0; j < dim; ++j) {
            st.mean[j] += s.features[j];
        }
    }
    for (double& m : st.mean) {
        m /= static_cast<double>(n);
    }
    for (const LabeledSample& s : train.samples) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = s.features[j] - st.mean[j];
            st.stddev[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < dim; ++j) {
        st.stddev[j] = std::sqrt(st.stddev[j] / static_cast<double>(n));
        if (st.stddev[j] <= 1e-12 * std::max(1.0, std::abs(st.mean[j]))) {
            st.degenerate[j] = 1;
            st.stddev[j] = 0.0;
        }
    }

    StandardizeResult out{train, test, std::move(st)};
    for (LabeledSample& s : out.train.samples) {
        s.features = out.standardizer.apply(s.features);
    }
    for (LabeledSample& s : out.test.samples) {
        s.features = out.standardizer.apply(s.features);
    }
    return out;
}

Dataset synth_gaussian(std::size_t n_samples, const Vector& eigenvalues, Seed seed) {
    if (n_samples == 0) {
        throw ValueError("synth_gaussian: n_samples must be >= 1");
    }
    const std::size_t n = eigenvalues.size();
    if (n == 0) {
        throw ValueError("invalid spectrum: no eigenvalues given");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(eigenvalues[i] > 0.0)) {
            throw ValueError("invalid spectrum: eigenvalues must be strictly positive");
        }
        if (i > 0 && !(eigenvalues[i] < eigenvalues[i - 1])) {
            throw ValueError("invalid spectrum: eigenvalues must be strictly descending");
        }
    }

    Rng rng(seed);

    // Random orthonormal rows via modified Gram-Schmidt on a Gaussian matrix.
    Matrix basis(n, n);
    for (double& v : basis.data()) {
        v = rng.gaussian();
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto ri = basis.row(i);
        for (std::size_t k = 0; k < i; ++k) {
            const auto rk = basis.row(k);
            const double proj = dot(ri, rk);
            for (std::size_t j = 0; j < n; ++j) {
                ri[j] -= proj * rk[j];
            }
        }
        const double norm = std::sqrt(dot(ri, ri));
        if (norm < 1e-12) {
            throw NumericError("synth_gaussian: degenerate random basis");
        }
        for (double& v : ri) {
            v /= norm;
        }
    }

    Vector scale(n);
    for (std::size_t i = 0; i < n; ++i) {
        scale[i] = std::sqrt(eigenvalues[i]);
    }

    Dataset ds;
    ds.name = "synthetic";
    ds.dim = n;
    ds.classes = 1;
    ds.provenance = "synth_gaussian(n_samples=" + std::to_string(n_samples) + ", seed=" + std::to_string(seed.value) + ")";
    ds.samples.reserve(n_samples);
    Vector g(n);
    for (std::size_t s = 0; s < n_samples; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = scale[i] * rng.gaussian();
        }
        Vector x(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto bi = basis.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                x[j] += g[i] * bi[j];
            }
        }
        ds.samples.push_back({std::move(x), 0});
    }
    ds.planted_basis = std::move(basis);
    ds.planted_spectrum = eigenvalues;
    return ds;
}

}  // namespace hebgha
