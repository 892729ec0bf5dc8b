#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hebgha/data.hpp"
#include "hebgha/evaluation.hpp"
#include "hebgha/fabric.hpp"

using namespace hebgha;

namespace {

std::vector<Vector> random_inputs(Rng& gen, std::size_t count, std::size_t n) {
    std::vector<Vector> inputs(count, Vector(n));
    for (auto& x : inputs) {
        for (double& v : x) {
            v = gen.uniform(-1.5, 1.5);
        }
    }
    return inputs;
}

// Exactly-once / single-copy / hop-consistency check for one
// (source node, destination set) scenario on a fresh simulator.
void check_multicast_scenario(const Topology& topo, CoreId source, const std::vector<CoreId>& dests) {
    FabricSimulator sim(topo);
    program_multicast_routes(sim, source, dests);
    const DeliveryReport report = inject_and_route(sim, AerPacket{static_cast<std::uint32_t>(source), {}, 0}, source);

    std::map<CoreId, std::size_t> delivered;
    for (const Delivery& d : report.deliveries) {
        ++delivered[d.core];
        const std::size_t bfs = shortest_hops(topo, topo.node_of_core(source), topo.node_of_core(d.core));
        CHECK(d.hops == bfs);
        CHECK(d.arrival_tick == bfs);
    }
    const std::set<CoreId> expected(dests.begin(), dests.end());
    CHECK(delivered.size() == expected.size());
    for (const CoreId c : expected) {
        CHECK(delivered[c] == 1);
    }
    // Zero stray deliveries: counted cores are exactly the expected set.
    for (const auto& [core, count] : delivered) {
        CHECK(expected.count(core) == 1);
        CHECK(count == 1);
    }
    // Single copy per directed link.
    for (const std::uint64_t uses : sim.stats().per_link) {
        CHECK(uses <= 1);
    }
    CHECK(report.dropped == 0);
}

}  // namespace

TEST_CASE("build_torus constructs the six-neighbor wrap-around grid") {
    const Topology t = build_torus(3, 3, 1);
    CHECK(t.node_count() == 9);
    CHECK(t.core_count() == 9);

    // Link symmetry: following a link and its inverse returns home.
    for (NodeId n = 0; n < t.node_count(); ++n) {
        for (std::size_t d = 0; d < kLinkCount; ++d) {
            const Link link = static_cast<Link>(d);
            CHECK(t.neighbor(t.neighbor(n, link), inverse(link)) == n);
        }
    }

    const Topology self = build_torus(1, 1, 1);
    for (std::size_t d = 0; d < kLinkCount; ++d) {
        CHECK(self.neighbor(0, static_cast<Link>(d)) == 0);
    }

    const Topology spin = build_torus(3, 3, 18);
    CHECK(spin.core_count() == 162);
    CHECK(spin.node_of_core(17) == 0);
    CHECK(spin.node_of_core(18) == 1);

    CHECK_THROWS_AS(build_torus(0, 3, 1), ValueError);
    CHECK_THROWS_AS(build_torus(3, 0, 1), ValueError);
    CHECK_THROWS_AS(build_torus(3, 3, 0), ValueError);
}

TEST_CASE("shortest_hops basics and the diagonal wrap case") {
    const Topology t = build_torus(3, 3, 1);
    CHECK(shortest_hops(t, 0, 0) == 0);
    CHECK(shortest_hops(t, 0, t.neighbor(0, Link::kE)) == 1);
    // (0,0) -> (2,2) wraps with one SW step.
    CHECK(shortest_hops(t, t.node_at(0, 0), t.node_at(2, 2)) == 1);
}

TEST_CASE("deterministic paths are minimal on all pairs of several tori") {
    for (const auto& [w, h] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 3}, {4, 4}, {5, 3}, {1, 4}}) {
        const Topology t = build_torus(w, h, 1);
        for (NodeId a = 0; a < t.node_count(); ++a) {
            for (NodeId b = 0; b < t.node_count(); ++b) {
                const std::vector<Link> path = deterministic_path(t, a, b);
                CHECK(path.size() == shortest_hops(t, a, b));
                NodeId at = a;
                for (const Link step : path) {
                    at = t.neighbor(at, step);
                }
                CHECK(at == b);
            }
        }
    }
}

TEST_CASE("multicast to the source's own node is a pure local delivery") {
    const Topology t = build_torus(3, 3, 2);
    FabricSimulator sim(t);
    program_multicast_routes(sim, CoreId{0}, {CoreId{1}});  // same node, other core
    const DeliveryReport report = inject_and_route(sim, AerPacket{0, {}, 0}, 0);
    REQUIRE(report.deliveries.size() == 1);
    CHECK(report.deliveries[0].core == 1);
    CHECK(report.deliveries[0].hops == 0);
    CHECK(report.deliveries[0].arrival_tick == 0);
    CHECK(sim.stats().link_traversals == 0);
}

TEST_CASE("two cores on one remote node share a single routed copy") {
    const Topology t = build_torus(3, 3, 2);
    FabricSimulator sim(t);
    const CoreId source = 0;                       // node (0,0)
    const std::vector<CoreId> dests{2, 3};         // both on node (1,0)
    program_multicast_routes(sim, source, dests);
    CHECK(sim.table(1).entries.size() == 1);
    CHECK(sim.table(1).entries[0].local_cores == std::vector<std::size_t>{0, 1});

    const DeliveryReport report = inject_and_route(sim, AerPacket{0, {}, 0}, source);
    CHECK(report.deliveries.size() == 2);
    CHECK(sim.stats().link_traversals == 1);
}

TEST_CASE("broadcast on a 3x3 torus reaches every node once over a minimal tree") {
    const Topology t = build_torus(3, 3, 1);
    FabricSimulator sim(t);
    std::vector<CoreId> all;
    for (CoreId c = 0; c < t.core_count(); ++c) {
        all.push_back(c);
    }
    program_multicast_routes(sim, CoreId{0}, all);
    const DeliveryReport report = inject_and_route(sim, AerPacket{0, {}, 0}, 0);
    CHECK(report.deliveries.size() == 9);
    CHECK(sim.stats().link_traversals <= 8);

    std::uint64_t max_tick = 0;
    std::size_t max_bfs = 0;
    for (const Delivery& d : report.deliveries) {
        max_tick = std::max(max_tick, d.arrival_tick);
        max_bfs = std::max(max_bfs, shortest_hops(t, 0, t.node_of_core(d.core)));
    }
    CHECK(max_tick == max_bfs);
}

TEST_CASE("unprogrammed keys drop with a diagnostic count") {
    const Topology t = build_torus(2, 2, 1);
    FabricSimulator sim(t);
    const DeliveryReport report = inject_and_route(sim, AerPacket{99, {}, 0}, 0);
    CHECK(report.deliveries.empty());
    CHECK(report.dropped == 1);
}

TEST_CASE("exhaustive multicast correctness on the 3x3 torus") {
    const Topology t = build_torus(3, 3, 1);
    std::vector<CoreId> cores(t.core_count());
    for (CoreId c = 0; c < t.core_count(); ++c) {
        cores[c] = c;
    }
    for (CoreId source = 0; source < t.core_count(); ++source) {
        for (CoreId a = 0; a < 9; ++a) {
            check_multicast_scenario(t, source, {a});
            for (CoreId b = a + 1; b < 9; ++b) {
                check_multicast_scenario(t, source, {a, b});
                for (CoreId c = b + 1; c < 9; ++c) {
                    check_multicast_scenario(t, source, {a, b, c});
                }
            }
        }
    }
}

TEST_CASE("sampled multicast correctness on the 4x4 torus") {
    const Topology t = build_torus(4, 4, 1);
    Rng gen(Seed{1234});
    for (int trial = 0; trial < 1000; ++trial) {
        const CoreId source = gen.bounded(t.core_count());
        std::set<CoreId> dests;
        const std::size_t count = 1 + gen.bounded(3);
        while (dests.size() < count) {
            dests.insert(gen.bounded(t.core_count()));
        }
        check_multicast_scenario(t, source, std::vector<CoreId>(dests.begin(), dests.end()));
    }
}

TEST_CASE("packet trace lines are tab-separated tick/key/source/dest/hops") {
    const Topology t = build_torus(2, 2, 1);
    FabricSimulator sim(t);
    std::ostringstream trace;
    sim.set_trace(&trace);
    program_multicast_routes(sim, CoreId{0}, {CoreId{3}});
    inject_and_route(sim, AerPacket{0, {}, 0}, 0);
    const std::string line = trace.str();
    CHECK(!line.empty());
    CHECK(std::count(line.begin(), line.end(), '\t') == 4);
}

TEST_CASE("map_rows_to_cores enumerates row-major nodes, cores within node first") {
    const Topology t = build_torus(3, 3, 1);
    const Mapping m = map_rows_to_cores(3, t);
    REQUIRE(m.row_core.size() == 3);
    CHECK(t.node_of_core(m.row_core[0]) == t.node_at(0, 0));
    CHECK(t.node_of_core(m.row_core[1]) == t.node_at(1, 0));
    CHECK(t.node_of_core(m.row_core[2]) == t.node_at(2, 0));

    CHECK(map_rows_to_cores(t.core_count(), t).row_core.size() == 9);
    CHECK_THROWS_AS(map_rows_to_cores(t.core_count() + 1, t), CapacityError);

    const Topology multi = build_torus(2, 2, 3);
    const Mapping mm = map_rows_to_cores(5, multi);
    CHECK(multi.node_of_core(mm.row_core[2]) == 0);
    CHECK(multi.node_of_core(mm.row_core[3]) == 1);
}

TEST_CASE("distributed GHA with one core equals the reference with no chain traffic") {
    Rng gen(Seed{9001});
    const std::vector<Vector> inputs = random_inputs(gen, 20, 4);
    GhaConfig cfg;
    cfg.eta0 = 0.01;
    cfg.tau = 50.0;
    cfg.epochs = 2;
    cfg.seed = Seed{3};
    cfg.init_scale = 0.01;

    const Topology t = build_torus(1, 1, 1);
    const DistributedGhaResult dist = run_distributed_gha(inputs, cfg, t, 1);
    const auto [ref, trace] = gha_train(gha_init(1, 4, cfg), inputs, cfg);
    CHECK(dist.weights.c == ref.c);
    CHECK(dist.stats.link_traversals == 0);
    // Closed form: N packets x 1 core per sample, no chain.
    CHECK(dist.stats.connection_events == cfg.epochs * inputs.size() * 4);
}

TEST_CASE("distributed GHA on the synthetic fixture is bit-identical with exact event counts") {
    const Vector spectrum{8.0, 4.0, 2.0, 1.0, 0.5, 0.25, 0.125, 0.0625};
    const Dataset ds = synth_gaussian(200, spectrum, Seed{1});
    const std::vector<Vector> inputs = ds.feature_vectors();
    GhaConfig cfg;
    cfg.eta0 = 0.01;
    cfg.epochs = 2;
    cfg.tau = default_tau(inputs.size(), cfg.epochs);
    cfg.seed = Seed{7};
    cfg.init_scale = 0.01;

    const std::size_t m = 3;
    const std::size_t n = 8;
    const Topology t = build_torus(3, 3, 1);
    const DistributedGhaResult dist = run_distributed_gha(inputs, cfg, t, m);
    const auto [ref, ref_trace] = gha_train(gha_init(m, n, cfg), inputs, cfg);

    CHECK(dist.weights.c == ref.c);
    const std::uint64_t expected_events = cfg.epochs * inputs.size() * (n * m + (m - 1) * n);
    CHECK(dist.stats.connection_events == expected_events);

    // The traces agree step for step.
    REQUIRE(dist.trace.steps.size() == ref_trace.steps.size());
    for (std::size_t i = 0; i < dist.trace.steps.size(); ++i) {
        CHECK(dist.trace.steps[i].delta_norm == ref_trace.steps[i].delta_norm);
        CHECK(dist.trace.steps[i].eta == ref_trace.steps[i].eta);
    }
}

TEST_CASE("distributed GHA equals the reference over randomized configurations") {
    Rng gen(Seed{31415});
    const std::vector<Topology> topologies = {build_torus(1, 1, 4), build_torus(2, 2, 1), build_torus(3, 3, 1),
                                              build_torus(2, 3, 2), build_torus(4, 4, 1)};
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + gen.bounded(7);           // N <= 8
        const std::size_t m = 1 + gen.bounded(std::min<std::size_t>(n, 4));  // m <= 4, m <= n
        const std::size_t samples = 1 + gen.bounded(64);
        GhaConfig cfg;
        cfg.eta0 = gen.uniform(1e-3, 0.05);
        cfg.tau = gen.uniform(10.0, 500.0);
        cfg.epochs = 1 + gen.bounded(3);
        cfg.seed = Seed{gen.next_u64()};
        cfg.init_scale = 0.01;

        const Topology& topo = topologies[gen.bounded(topologies.size())];
        if (m > topo.core_count()) {
            continue;
        }
        const std::vector<Vector> inputs = random_inputs(gen, samples, n);

        const DistributedGhaResult dist = run_distributed_gha(inputs, cfg, topo, m);
        const WeightMatrix init =
            gha_init(m, n, cfg, m < n ? GhaDimContract::kReduce : GhaDimContract::kOracleComparison);
        const auto [ref, trace] = gha_train(init, inputs, cfg);

        CHECK(dist.weights.c == ref.c);
        CHECK(dist.stats.connection_events == cfg.epochs * samples * (n * m + (m - 1) * n));

        // Determinism: identical arguments, identical stats and trace.
        const DistributedGhaResult again = run_distributed_gha(inputs, cfg, topo, m);
        CHECK(again.weights.c == dist.weights.c);
        CHECK(again.stats.connection_events == dist.stats.connection_events);
        CHECK(again.stats.link_traversals == dist.stats.link_traversals);
        CHECK(again.stats.packets_injected == dist.stats.packets_injected);
        CHECK(again.stats.max_hops == dist.stats.max_hops);
    }
}

TEST_CASE("distributed GHA keeps running on all-zero inputs without weight motion") {
    const std::vector<Vector> zeros(10, Vector(4, 0.0));
    GhaConfig cfg;
    cfg.eta0 = 0.01;
    cfg.tau = 100.0;
    cfg.epochs = 1;
    cfg.seed = Seed{2};
    cfg.init_scale = 0.01;
    const Topology t = build_torus(2, 2, 1);
    const DistributedGhaResult dist = run_distributed_gha(zeros, cfg, t, 2);
    const WeightMatrix init = gha_init(2, 4, cfg);
    CHECK(dist.weights.c == init.c);
    CHECK(dist.stats.connection_events == 10 * (4 * 2 + 1 * 4));
    for (const auto& step : dist.trace.steps) {
        CHECK(step.delta_norm == 0.0);
    }
}

TEST_CASE("distributed GHA enforces capacity and shape") {
    GhaConfig cfg;
    cfg.eta0 = 0.01;
    cfg.tau = 10.0;
    cfg.epochs = 1;
    cfg.seed = Seed{1};
    cfg.init_scale = 0.01;
    const Topology t = build_torus(1, 1, 2);
    CHECK_THROWS_AS(run_distributed_gha({{1, 2, 3, 4}}, cfg, t, 3), CapacityError);
    CHECK_THROWS_AS(run_distributed_gha({}, cfg, t, 1), EmptyDatasetError);
    CHECK_THROWS_AS(run_distributed_gha({{1, 2}, {1, 2, 3}}, cfg, t, 1), ShapeError);
}

TEST_CASE("distributed Hebbian matches the host-side trainer bit for bit") {
    Rng gen(Seed{777});
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + gen.bounded(6);
        const std::size_t classes = 2 + gen.bounded(3);
        const std::size_t count = 2 + gen.bounded(30);
        const std::size_t epochs = 1 + gen.bounded(3);

        Dataset ds;
        ds.name = "rnd";
        ds.dim = n;
        ds.classes = classes;
        for (std::size_t s = 0; s < count; ++s) {
            Vector x(n);
            for (double& v : x) {
                v = gen.uniform(-2.0, 2.0);
            }
            ds.samples.push_back({std::move(x), static_cast<int>(s % classes)});
        }

        const Topology t = build_torus(2, 2, 2);
        const DistributedHebbianResult dist =
            run_distributed_hebbian(ds.feature_vectors(), ds.labels(), classes, epochs, t);
        const auto [ref, trace] = train_multiclass_hebbian(ds, epochs);

        REQUIRE(dist.models.size() == ref.models.size());
        for (std::size_t k = 0; k < classes; ++k) {
            CHECK(dist.models[k].weights == ref.models[k].weights);
            CHECK(dist.models[k].bias == ref.models[k].bias);
        }
        CHECK(dist.stats.connection_events == epochs * count * (n + 1) * classes);
    }
}
