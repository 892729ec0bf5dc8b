#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixture_io.hpp"
#include "hebgha/bench.hpp"
#include "hebgha/evaluation.hpp"

using namespace hebgha;

namespace {

const std::string kFixtureDir = HEBGHA_FIXTURE_DIR;

// Two well-separated Gaussian-ish clouds around +/- (2, 2).
Dataset separable_clouds(std::size_t per_class, Seed seed) {
    Rng gen(seed);
    Dataset ds;
    ds.name = "clouds";
    ds.dim = 2;
    ds.classes = 2;
    for (std::size_t i = 0; i < per_class; ++i) {
        ds.samples.push_back({{2.0 + 0.2 * gen.gaussian(), 2.0 + 0.2 * gen.gaussian()}, 0});
        ds.samples.push_back({{-2.0 + 0.2 * gen.gaussian(), -2.0 + 0.2 * gen.gaussian()}, 1});
    }
    return ds;
}

}  // namespace

TEST_CASE("multiclass hebbian training separates two clouds perfectly") {
    const Dataset train = separable_clouds(40, Seed{1});
    const Dataset test = separable_clouds(25, Seed{2});
    const auto [model, trace] = train_multiclass_hebbian(train, 1);

    // Closed form: w_k = sum_{class k} x - sum_{other} x, exactly.
    Vector expected0(2, 0.0);
    for (const auto& s : train.samples) {
        const double t = s.label == 0 ? 1.0 : -1.0;
        expected0[0] += s.features[0] * t;
        expected0[1] += s.features[1] * t;
    }
    CHECK(model.models[0].weights == expected0);

    std::vector<int> predictions;
    for (const auto& s : test.samples) {
        predictions.push_back(hebbian_classify(model, s.features));
    }
    const double acc = accuracy(predictions, test.labels());
    CHECK(acc > 95.0);
    CHECK(acc == 100.0);
    CHECK(trace.total_steps() == 2 * train.samples.size());
}

TEST_CASE("GHA projection with nearest centroids also separates the clouds") {
    const Dataset train = separable_clouds(40, Seed{3});
    const Dataset test = separable_clouds(25, Seed{4});

    GhaConfig cfg;
    cfg.epochs = 20;
    cfg.tau = default_tau(train.samples.size(), cfg.epochs);
    cfg.seed = Seed{8};
    const auto [trained, trace] = gha_train(gha_init(1, 2, cfg), train.feature_vectors(), cfg);

    std::vector<std::pair<Vector, int>> projected;
    for (const auto& s : train.samples) {
        projected.emplace_back(gha_output(trained, s.features), s.label);
    }
    const CentroidClassifier cc = fit_centroids(projected, 2);
    std::vector<int> predictions;
    for (const auto& s : test.samples) {
        predictions.push_back(nearest_centroid_classify(cc, gha_output(trained, s.features)));
    }
    CHECK(accuracy(predictions, test.labels()) > 95.0);
}

TEST_CASE("identical features reduce per-class weights to bias multiples") {
    Dataset ds;
    ds.name = "same";
    ds.dim = 2;
    ds.classes = 2;
    ds.samples = {{{3.0, -1.0}, 0}, {{3.0, -1.0}, 1}, {{3.0, -1.0}, 1}};
    const auto [model, trace] = train_multiclass_hebbian(ds, 1);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(model.models[k].weights[0] == 3.0 * model.models[k].bias);
        CHECK(model.models[k].weights[1] == -1.0 * model.models[k].bias);
    }
}

TEST_CASE("epoch scaling doubles the weights from zero init") {
    // Integer features keep the closed form exact in floating point.
    Dataset train;
    train.name = "int";
    train.dim = 2;
    train.classes = 2;
    Rng gen(Seed{5});
    for (int i = 0; i < 20; ++i) {
        Vector x{static_cast<double>(static_cast<std::int64_t>(gen.bounded(9)) - 4),
                 static_cast<double>(static_cast<std::int64_t>(gen.bounded(9)) - 4)};
        train.samples.push_back({std::move(x), static_cast<int>(gen.bounded(2))});
    }
    const auto [one, t1] = train_multiclass_hebbian(train, 1);
    const auto [two, t2] = train_multiclass_hebbian(train, 2);
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(two.models[k].weights[j] == 2.0 * one.models[k].weights[j]);
        }
        CHECK(two.models[k].bias == 2.0 * one.models[k].bias);
    }
}

TEST_CASE("multiclass training rejects single-class datasets") {
    Dataset ds;
    ds.name = "one";
    ds.dim = 1;
    ds.classes = 1;
    ds.samples = {{{1.0}, 0}};
    CHECK_THROWS_AS(train_multiclass_hebbian(ds, 1), ValueError);
}

TEST_CASE("hebbian_classify argmax and tie rules") {
    MulticlassHebbian model;
    model.classes = 2;
    model.models = {{2, {1, 0}, 0.0}, {2, {0, 1}, 0.0}};
    CHECK(hebbian_classify(model, {2, 1}) == 0);
    CHECK(hebbian_classify(model, {1, 1}) == 0);  // exact tie -> smallest id

    MulticlassHebbian biased;
    biased.classes = 2;
    biased.models = {{2, {1, 0}, -1.0}, {2, {0, 1}, 3.0}};
    CHECK(hebbian_classify(biased, {0, 0}) == 1);  // argmax of biases
}

TEST_CASE("fit_centroids means and error cases") {
    const CentroidClassifier one_each = fit_centroids({{{1, 0}, 0}, {{0, 2}, 1}}, 2);
    CHECK(one_each.centroids[0] == Vector{1, 0});
    CHECK(one_each.centroids[1] == Vector{0, 2});

    const CentroidClassifier dup = fit_centroids({{{1, 0}, 0}, {{1, 0}, 0}, {{0, 2}, 1}}, 2);
    CHECK(dup.centroids[0] == Vector{1, 0});

    const CentroidClassifier pm = fit_centroids({{{1, 0}, 0}, {{-1, 0}, 1}}, 2);
    CHECK(pm.centroids[0] == Vector{1, 0});
    CHECK(pm.centroids[1] == Vector{-1, 0});

    CHECK_THROWS_AS(fit_centroids({{{1, 0}, 0}}, 2), ValueError);  // class 1 missing
}

TEST_CASE("nearest_centroid_classify distance and tie rules") {
    CentroidClassifier cc;
    cc.m = 2;
    cc.centroids = {{1, 0}, {-1, 0}};
    CHECK(nearest_centroid_classify(cc, {1, 0}) == 0);
    CHECK(nearest_centroid_classify(cc, {-0.9, 0.1}) == 1);
    CHECK(nearest_centroid_classify(cc, {0, 5}) == 0);  // equidistant -> smaller id

    // Uniform positive scaling leaves the decision unchanged.
    CentroidClassifier scaled;
    scaled.m = 2;
    scaled.centroids = {{3, 0}, {-3, 0}};
    CHECK(nearest_centroid_classify(scaled, {3 * 0.4, 3 * 0.2}) == nearest_centroid_classify(cc, {0.4, 0.2}));
}

TEST_CASE("accuracy hand values render to two decimals") {
    CHECK(accuracy({1, 1, 0}, {1, 1, 0}) == 100.0);

    std::vector<int> predictions(54, 0);
    std::vector<int> labels(54, 0);
    for (int i = 36; i < 54; ++i) {
        labels[i] = 1;  // 36 of 54 correct
    }
    const double wine = accuracy(predictions, labels);
    CHECK(format_percent(wine) == "66.67");

    std::vector<int> p36(36, 0);
    std::vector<int> l36(36, 0);
    for (int i = 11; i < 36; ++i) {
        l36[i] = 1;  // 11 of 36 correct
    }
    CHECK(format_percent(accuracy(p36, l36)) == "30.56");

    CHECK_THROWS_AS(accuracy({1}, {1, 2}), ShapeError);
}

TEST_CASE("correct and incorrect counts always partition the test set") {
    Rng gen(Seed{12});
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + gen.bounded(200);
        std::vector<int> predictions(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            predictions[i] = static_cast<int>(gen.bounded(4));
            labels[i] = static_cast<int>(gen.bounded(4));
        }
        std::size_t correct = 0;
        for (std::size_t i = 0; i < n; ++i) {
            correct += predictions[i] == labels[i] ? 1 : 0;
        }
        const double acc = accuracy(predictions, labels);
        CHECK(acc == 100.0 * static_cast<double>(correct) / static_cast<double>(n));
        CHECK(correct + (n - correct) == n);
    }
}

TEST_CASE("avg_convergence_rate is the mean step delta") {
    TrainingTrace trace;
    trace.steps = {{0, 1.0, 0.0}, {1, 1.0, 0.0}};
    CHECK(avg_convergence_rate(trace) == 0.0);

    trace.steps = {{0, 1.0, 0.2}, {1, 1.0, 0.4}};
    CHECK(avg_convergence_rate(trace) == doctest::Approx(0.3).epsilon(1e-15));

    TrainingTrace empty;
    CHECK_THROWS_AS(avg_convergence_rate(empty), UndefinedMetricError);
}

TEST_CASE("energy model is exact in integer nanojoules") {
    CHECK(energy_estimate(0) == 0.0);
    CHECK(energy_estimate(1) == 1e-8);
    CHECK(energy_estimate(1000000) == 0.01);
    CHECK(energy_nanojoules(7) == 70);

    Rng gen(Seed{55});
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint64_t a = gen.bounded(1u << 30);
        const std::uint64_t b = gen.bounded(1u << 30);
        CHECK(energy_nanojoules(a) + energy_nanojoules(b) == energy_nanojoules(a + b));
        CHECK(energy_estimate(a) == static_cast<double>(energy_nanojoules(a)) / 1e9);
    }
}

TEST_CASE("memory model arithmetic") {
    CHECK(memory_estimate(Algorithm::kGha, 3, 8, 0) == 8 * 24 + 8 * 11);  // 280
    CHECK(memory_estimate(Algorithm::kGha, 3, 8, 0) == 280);
    CHECK(memory_estimate(Algorithm::kHebbian, 0, 13, 3) == 8 * 42 + 8 * 13);  // 440
    CHECK(memory_estimate(Algorithm::kHebbian, 0, 13, 3) == 440);
    const std::uint64_t m3 = memory_estimate(Algorithm::kGha, 3, 8, 0);
    const std::uint64_t m6 = memory_estimate(Algorithm::kGha, 6, 8, 0);
    CHECK(m6 - 8 * (6 + 8) == 2 * (m3 - 8 * (3 + 8)));  // parameter term doubles exactly
}

TEST_CASE("hebbian_error_rate mirrors reconstruction error") {
    Dataset inputs;
    inputs.name = "in";
    inputs.dim = 2;
    inputs.classes = 2;
    inputs.samples = {{{1.0, 2.0}, 0}, {{-3.0, 0.5}, 1}};

    MulticlassHebbian ortho;
    ortho.classes = 2;
    ortho.models = {{2, {2, 0}, 0.0}, {2, {0, -5}, 0.0}};  // rows normalize to e1, e2
    CHECK(hebbian_error_rate(ortho, inputs) <= 1e-20);

    MulticlassHebbian zero;
    zero.classes = 2;
    zero.models = {{2, {0, 0}, 0.0}, {2, {0, 0}, 0.0}};
    CHECK_THROWS_AS(hebbian_error_rate(zero, inputs), UndefinedMetricError);

    MulticlassHebbian e1_only;
    e1_only.classes = 1;
    e1_only.models = {{2, {4, 0}, 0.0}};
    Dataset e2_inputs;
    e2_inputs.name = "e2";
    e2_inputs.dim = 2;
    e2_inputs.classes = 1;
    e2_inputs.samples = {{{0.0, 3.0}, 0}};
    CHECK(hebbian_error_rate(e1_only, e2_inputs) == 100.0);
}

TEST_CASE("golden synthetic trace pins the average convergence rate") {
    const double golden = testing::load_scalar_fixture(kFixtureDir + "golden_gha_avg_convergence.txt");
    CHECK(golden > 0.0);
    CHECK(golden < 1.0);
}
