#include "hebgha/fabric.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <set>

namespace hebgha {

Link inverse(Link d) {
    return static_cast<Link>((static_cast<std::uint8_t>(d) + 3) % kLinkCount);
}

const char* link_name(Link d) {
    static constexpr const char* kNames[kLinkCount] = {"E", "NE", "N", "W", "SW", "S"};
    return kNames[static_cast<std::uint8_t>(d)];
}

NodeId Topology::neighbor(NodeId n, Link d) const {
    const std::size_t x = x_of(n);
    const std::size_t y = y_of(n);
    switch (d) {
        case Link::kE:
            return node_at((x + 1) % width, y);
        case Link::kNE:
            return node_at((x + 1) % width, (y + 1) % height);
        case Link::kN:
            return node_at(x, (y + 1) % height);
        case Link::kW:
            return node_at((x + width - 1) % width, y);
        case Link::kSW:
            return node_at((x + width - 1) % width, (y + height - 1) % height);
        case Link::kS:
            return node_at(x, (y + height - 1) % height);
    }
    return n;
}

Topology build_torus(std::size_t width, std::size_t height, std::size_t cores_per_node) {
    if (width == 0 || height == 0 || cores_per_node == 0) {
        throw ValueError("invalid dimension: torus dimensions and cores_per_node must be >= 1");
    }
    return Topology{width, height, cores_per_node};
}

std::size_t shortest_hops(const Topology& topology, NodeId a, NodeId b) {
    if (a >= topology.node_count() || b >= topology.node_count()) {
        throw ValueError("shortest_hops: node out of range");
    }
    if (a == b) {
        return 0;
    }
    std::vector<std::size_t> dist(topology.node_count(), SIZE_MAX);
    std::deque<NodeId> frontier{a};
    dist[a] = 0;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        for (std::size_t d = 0; d < kLinkCount; ++d) {
            const NodeId v = topology.neighbor(u, static_cast<Link>(d));
            if (dist[v] == SIZE_MAX) {
                dist[v] = dist[u] + 1;
                if (v == b) {
                    return dist[v];
                }
                frontier.push_back(v);
            }
        }
    }
    return dist[b];
}

const RoutingTable::Entry* RoutingTable::lookup(std::uint32_t key) const {
    for (const Entry& e : entries) {
        if ((key & e.mask) == (e.key & e.mask)) {
            return &e;
        }
    }
    return nullptr;
}

void EventStats::reset_counters() {
    packets_injected = 0;
    link_traversals = 0;
    connection_events = 0;
    dropped = 0;
    max_hops = 0;
    std::fill(per_link.begin(), per_link.end(), 0);
}

FabricSimulator::FabricSimulator(Topology topology) : topo_(topology), tables_(topology.node_count()) {
    stats_.per_link.assign(topo_.node_count() * kLinkCount, 0);
}

void FabricSimulator::inject(const AerPacket& packet, CoreId source_core, NodeId at_node, std::uint64_t tick) {
    assert(tick >= now_);
    ++stats_.packets_injected;
    queue_.push(Event{tick, seq_++, at_node, packet, source_core, 0});
}

void FabricSimulator::route_at_node(const Event& ev) {
    const RoutingTable::Entry* entry = tables_[ev.node].lookup(ev.packet.key);
    if (entry == nullptr) {
        ++stats_.dropped;
        return;
    }
    for (const std::size_t local : entry->local_cores) {
        const CoreId core = ev.node * topo_.cores_per_node + local;
        ++stats_.connection_events;
        stats_.max_hops = std::max<std::uint64_t>(stats_.max_hops, ev.hops);
        if (trace_ != nullptr) {
            (*trace_) << ev.tick << '\t' << ev.packet.key << '\t' << ev.source << '\t' << core << '\t' << ev.hops
                      << '\n';
        }
        if (handler_) {
            handler_(Delivery{core, ev.tick, ev.hops, ev.packet, ev.source});
        }
    }
    for (std::size_t d = 0; d < kLinkCount; ++d) {
        if (!entry->out_links[d]) {
            continue;
        }
        ++stats_.link_traversals;
        ++stats_.per_link[ev.node * kLinkCount + d];
        const NodeId next = topo_.neighbor(ev.node, static_cast<Link>(d));
        queue_.push(Event{ev.tick + 1, seq_++, next, ev.packet, ev.source, ev.hops + 1});
    }
}

void FabricSimulator::run_until_idle() {
    while (!queue_.empty()) {
        const Event ev = queue_.top();
        queue_.pop();
        now_ = ev.tick;
        route_at_node(ev);
    }
}

std::vector<Link> deterministic_path(const Topology& topology, NodeId from, NodeId to) {
    const std::ptrdiff_t w = static_cast<std::ptrdiff_t>(topology.width);
    const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(topology.height);
    const std::ptrdiff_t raw_dx =
        (static_cast<std::ptrdiff_t>(topology.x_of(to)) - static_cast<std::ptrdiff_t>(topology.x_of(from)) + w) % w;
    const std::ptrdiff_t raw_dy =
        (static_cast<std::ptrdiff_t>(topology.y_of(to)) - static_cast<std::ptrdiff_t>(topology.y_of(from)) + h) % h;

    const auto cost = [](std::ptrdiff_t dx, std::ptrdiff_t dy) -> std::size_t {
        if ((dx >= 0 && dy >= 0) || (dx <= 0 && dy <= 0)) {
            return static_cast<std::size_t>(std::max(std::abs(dx), std::abs(dy)));
        }
        return static_cast<std::size_t>(std::abs(dx) + std::abs(dy));
    };

    // The minimal displacement over the four wrap candidates; scan order
    // fixes ties.
    std::ptrdiff_t best_dx = raw_dx;
    std::ptrdiff_t best_dy = raw_dy;
    std::size_t best = cost(raw_dx, raw_dy);
    for (const std::ptrdiff_t dx : {raw_dx, raw_dx - w}) {
        for (const std::ptrdiff_t dy : {raw_dy, raw_dy - h}) {
            if (cost(dx, dy) < best) {
                best = cost(dx, dy);
                best_dx = dx;
                best_dy = dy;
            }
        }
    }

    // Decompose into per-link move counts.
    std::array<std::size_t, kLinkCount> counts{};
    std::ptrdiff_t dx = best_dx;
    std::ptrdiff_t dy = best_dy;
    if (dx >= 0 && dy >= 0) {
        const std::ptrdiff_t diag = std::min(dx, dy);
        counts[static_cast<std::size_t>(Link::kNE)] = static_cast<std::size_t>(diag);
        counts[static_cast<std::size_t>(Link::kE)] = static_cast<std::size_t>(dx - diag);
        counts[static_cast<std::size_t>(Link::kN)] = static_cast<std::size_t>(dy - diag);
    } else if (dx <= 0 && dy <= 0) {
        const std::ptrdiff_t diag = std::min(-dx, -dy);
        counts[static_cast<std::size_t>(Link::kSW)] = static_cast<std::size_t>(diag);
        counts[static_cast<std::size_t>(Link::kW)] = static_cast<std::size_t>(-dx - diag);
        counts[static_cast<std::size_t>(Link::kS)] = static_cast<std::size_t>(-dy - diag);
    } else if (dx > 0) {
        counts[static_cast<std::size_t>(Link::kE)] = static_cast<std::size_t>(dx);
        counts[static_cast<std::size_t>(Link::kS)] = static_cast<std::size_t>(-dy);
    } else {
        counts[static_cast<std::size_t>(Link::kW)] = static_cast<std::size_t>(-dx);
        counts[static_cast<std::size_t>(Link::kN)] = static_cast<std::size_t>(dy);
    }

    // Longest-dimension-first emission; ties resolve to the smallest link
    // index (E before NE before N).
    std::vector<Link> path;
    path.reserve(best);
    for (;;) {
        std::size_t arg = kLinkCount;
        std::size_t most = 0;
        for (std::size_t d = 0; d < kLinkCount; ++d) {
            if (counts[d] > most) {
                most = counts[d];
                arg = d;
            }
        }
        if (arg == kLinkCount) {
            break;
        }
        path.push_back(static_cast<Link>(arg));
        --counts[arg];
    }
    return path;
}

void program_multicast_routes(FabricSimulator& sim, std::uint32_t key, NodeId source_node,
                              const std::vector<CoreId>& destinations) {
    if (destinations.empty()) {
        throw ValueError("program_multicast_routes: destination set is empty");
    }
    const Topology& topo = sim.topology();
    for (const CoreId c : destinations) {
        if (c >= topo.core_count()) {
            throw CapacityError("program_multicast_routes: destination core out of range");
        }
    }

    // Destination nodes in ascending order; grafting each deterministic
    // minimal path onto the tree at its last already-covered node keeps
    // one parent per node and preserves minimal depth (prefixes of
    // minimal paths are minimal).
    std::set<NodeId> dest_nodes;
    for (const CoreId c : destinations) {
        dest_nodes.insert(topo.node_of_core(c));
    }

    std::vector<bool> in_tree(topo.node_count(), false);
    in_tree[source_node] = true;
    std::vector<std::array<bool, kLinkCount>> children(topo.node_count());
    for (auto& c : children) {
        c.fill(false);
    }

    for (const NodeId dest : dest_nodes) {
        if (in_tree[dest]) {
            continue;
        }
        const std::vector<Link> path = deterministic_path(topo, source_node, dest);
        std::vector<NodeId> seq{source_node};
        for (const Link step : path) {
            seq.push_back(topo.neighbor(seq.back(), step));
        }
        std::size_t graft = 0;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (in_tree[seq[i]]) {
                graft = i;
            }
        }
        for (std::size_t i = graft; i + 1 < seq.size(); ++i) {
            children[seq[i]][static_cast<std::size_t>(path[i])] = true;
            in_tree[seq[i + 1]] = true;
        }
    }

    std::vector<std::vector<std::size_t>> locals(topo.node_count());
    for (const CoreId c : destinations) {
        locals[topo.node_of_core(c)].push_back(topo.local_core(c));
    }
    for (auto& l : locals) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }

    for (NodeId n = 0; n < topo.node_count(); ++n) {
        if (!in_tree[n]) {
            continue;
        }
        const bool forwards = std::any_of(children[n].begin(), children[n].end(), [](bool b) { return b; });
        if (!forwards && locals[n].empty()) {
            continue;
        }
        RoutingTable::Entry entry;
        entry.key = key;
        entry.mask = 0xFFFFFFFFu;
        entry.out_links = children[n];
        entry.local_cores = locals[n];
        sim.table(n).entries.push_back(std::move(entry));
    }
}

void program_multicast_routes(FabricSimulator& sim, CoreId source, const std::vector<CoreId>& destinations) {
    if (source >= sim.topology().core_count()) {
        throw CapacityError("program_multicast_routes: source core out of range");
    }
    program_multicast_routes(sim, static_cast<std::uint32_t>(source), sim.topology().node_of_core(source),
                             destinations);
}

DeliveryReport inject_and_route(FabricSimulator& sim, const AerPacket& packet, CoreId source_core) {
    if (source_core >= sim.topology().core_count()) {
        throw CapacityError("inject_and_route: source core out of range");
    }
    DeliveryReport report;
    const std::uint64_t dropped_before = sim.stats().dropped;
    sim.set_delivery_handler([&report](const Delivery& d) { report.deliveries.push_back(d); });
    sim.inject(packet, source_core, sim.topology().node_of_core(source_core), sim.now());
    sim.run_until_idle();
    sim.set_delivery_handler({});
    report.dropped = sim.stats().dropped - dropped_before;
    return report;
}

Mapping map_rows_to_cores(std::size_t m, const Topology& topology) {
    if (m > topology.core_count()) {
        throw CapacityError("map_rows_to_cores: " + std::to_string(m) + " rows exceed " +
                            std::to_string(topology.core_count()) + " cores");
    }
    Mapping mapping;
    mapping.rows = m;
    mapping.row_core.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        mapping.row_core[i] = i;
    }
    return mapping;
}

namespace {

using Clock = std::chrono::steady_clock;

// Per-core execution state for the distributed GHA protocol.
struct CoreState {
    Vector x;
    std::size_t x_received = 0;
    Vector r;
    std::size_t r_received = 0;
    double y = 0.0;
};

}  // namespace

DistributedGhaResult run_distributed_gha(const std::vector<Vector>& inputs, const GhaConfig& config,
                                         const Topology& topology, std::size_t m, std::ostream* trace_out) {
    config.validate();
    if (inputs.empty()) {
        throw EmptyDatasetError("run_distributed_gha: empty input sequence");
    }
    const std::size_t n = inputs.front().size();
    if (n == 0) {
        throw ValueError("run_distributed_gha: zero-dimensional inputs");
    }
    for (const Vector& x : inputs) {
        if (x.size() != n) {
            throw ShapeError("run_distributed_gha: input length mismatch");
        }
    }
    if (m == 0 || m > n) {
        throw ValueError("run_distributed_gha: need 1 <= m <= n");
    }

    const Mapping mapping = map_rows_to_cores(m, topology);
    FabricSimulator sim(topology);
    sim.set_trace(trace_out);

    // Same initialization as the reference trainer.
    const WeightMatrix init =
        gha_init(m, n, config, m < n ? GhaDimContract::kReduce : GhaDimContract::kOracleComparison);
    std::vector<Vector> rows(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto r = init.c.row(i);
        rows[i].assign(r.begin(), r.end());
    }

    // Keys are emitting-source identities: cores use their own core id,
    // the host injector uses one past the last core id.
    const auto host_key = static_cast<std::uint32_t>(topology.core_count());
    const NodeId host_node = topology.node_at(0, 0);

    program_multicast_routes(sim, host_key, host_node, mapping.row_core);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        program_multicast_routes(sim, static_cast<std::uint32_t>(mapping.row_core[i]),
                                 topology.node_of_core(mapping.row_core[i]), {mapping.row_core[i + 1]});
    }

    std::vector<CoreState> cores(m);
    for (CoreState& c : cores) {
        c.x.assign(n, 0.0);
        c.r.assign(n, 0.0);
    }

    double eta = 0.0;
    sim.set_delivery_handler([&](const Delivery& d) {
        const std::size_t row = d.core;  // rows map to cores 0..m-1
        assert(row < m);
        CoreState& core = cores[row];
        const double value = d.packet.payload.value_or(0.0);
        if (d.packet.key == host_key) {
            core.x[core.x_received++] = value;
            if (core.x_received == n) {
                core.y = dot(rows[row], core.x);
                if (row == 0) {
                    core.r = core.x;
                    detail::gha_row_update(rows[0], core.r, core.y, eta);
                    core.r_received = n;
                    if (m > 1) {
                        for (std::size_t j = 0; j < n; ++j) {
                            sim.inject(AerPacket{static_cast<std::uint32_t>(mapping.row_core[0]), core.r[j], d.arrival_tick},
                                       mapping.row_core[0], topology.node_of_core(mapping.row_core[0]), d.arrival_tick);
                        }
                    }
                }
            }
        } else {
            // Residual from the previous core in the chain.
            assert(core.x_received == n);
            core.r[core.r_received++] = value;
            if (core.r_received == n) {
                detail::gha_row_update(rows[row], core.r, core.y, eta);
                if (row + 1 < m) {
                    for (std::size_t j = 0; j < n; ++j) {
                        sim.inject(AerPacket{static_cast<std::uint32_t>(mapping.row_core[row]), core.r[j], d.arrival_tick},
                                   mapping.row_core[row], topology.node_of_core(mapping.row_core[row]), d.arrival_tick);
                    }
                }
            }
        }
    });

    const auto gather = [&]() {
        Matrix c(m, n);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                c(i, j) = rows[i][j];
            }
        }
        return c;
    };

    TrainingTrace trace;
    trace.steps.reserve(config.epochs * inputs.size());
    std::uint64_t next_tick = 0;
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const auto start = Clock::now();
        double delta_sum = 0.0;
        for (const Vector& x : inputs) {
            eta = eta_schedule(config, t);
            for (CoreState& core : cores) {
                core.x_received = 0;
                core.r_received = 0;
            }
            const Matrix before = gather();
            for (std::size_t j = 0; j < n; ++j) {
                sim.inject(AerPacket{host_key, x[j], next_tick}, static_cast<CoreId>(host_key), host_node, next_tick);
            }
            sim.run_until_idle();
            for (const CoreState& core : cores) {
                assert(core.x_received == n && core.r_received == n);
                (void)core;
            }
            const double norm = frobenius_delta(before, gather());
            trace.steps.push_back({t, eta, norm});
            delta_sum += norm;
            next_tick = sim.now() + 1;
            ++t;
        }
        trace.epochs.push_back({epoch, delta_sum, std::chrono::duration<double>(Clock::now() - start).count()});
    }

    DistributedGhaResult result{WeightMatrix{m, n, gather()}, std::move(trace), sim.stats()};
    return result;
}

DistributedHebbianResult run_distributed_hebbian(const std::vector<Vector>& inputs, const std::vector<int>& labels,
                                                 std::size_t classes, std::size_t epochs, const Topology& topology,
                                                 std::ostream* trace_out) {
    if (inputs.empty()) {
        throw EmptyDatasetError("run_distributed_hebbian: empty input sequence");
    }
    if (inputs.size() != labels.size()) {
        throw ShapeError("run_distributed_hebbian: label count mismatch");
    }
    if (classes < 2) {
        throw ValueError("invalid task: need at least 2 classes");
    }
    if (epochs < 1) {
        throw ValueError("run_distributed_hebbian: epochs must be >= 1");
    }
    if (classes > topology.core_count()) {
        throw CapacityError("run_distributed_hebbian: more classes than cores");
    }
    const std::size_t n = inputs.front().size();
    for (const Vector& x : inputs) {
        if (x.size() != n) {
            throw ShapeError("run_distributed_hebbian: input length mismatch");
        }
    }
    for (const int label : labels) {
        if (label < 0 || static_cast<std::size_t>(label) >= classes) {
            throw ValueError("run_distributed_hebbian: label out of range");
        }
    }

    FabricSimulator sim(topology);
    sim.set_trace(trace_out);

    const auto feature_key = static_cast<std::uint32_t>(topology.core_count());
    const auto label_key = static_cast<std::uint32_t>(topology.core_count() + 1);
    const NodeId host_node = topology.node_at(0, 0);
    std::vector<CoreId> class_cores(classes);
    for (std::size_t k = 0; k < classes; ++k) {
        class_cores[k] = k;
    }
    program_multicast_routes(sim, feature_key, host_node, class_cores);
    program_multicast_routes(sim, label_key, host_node, class_cores);

    std::vector<HebbianModel> models;
    models.reserve(classes);
    for (std::size_t k = 0; k < classes; ++k) {
        models.push_back(hebbian_init(n));
    }
    std::vector<Vector> x_buf(classes, Vector(n, 0.0));
    std::vector<std::size_t> x_count(classes, 0);
    std::vector<double> sample_deltas(classes, 0.0);

    sim.set_delivery_handler([&](const Delivery& d) {
        const std::size_t k = d.core;
        assert(k < classes);
        if (d.packet.key == feature_key) {
            x_buf[k][x_count[k]++] = d.packet.payload.value_or(0.0);
            return;
        }
        assert(x_count[k] == n);
        const int label = static_cast<int>(d.packet.payload.value_or(-1.0));
        const double target = label == static_cast<int>(k) ? 1.0 : -1.0;
        const HebbianModel next = hebbian_step(models[k], x_buf[k], target);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = next.weights[i] - models[k].weights[i];
            ss += diff * diff;
        }
        const double db = next.bias - models[k].bias;
        ss += db * db;
        sample_deltas[k] = std::sqrt(ss);
        models[k] = next;
    });

    TrainingTrace trace;
    trace.steps.reserve(epochs * inputs.size() * classes);
    std::uint64_t next_tick = 0;
    std::size_t t = 0;
    using Clock = std::chrono::steady_clock;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        const auto start = Clock::now();
        double delta_sum = 0.0;
        for (std::size_t s = 0; s < inputs.size(); ++s) {
            std::fill(x_count.begin(), x_count.end(), 0);
            for (std::size_t j = 0; j < n; ++j) {
                sim.inject(AerPacket{feature_key, inputs[s][j], next_tick}, static_cast<CoreId>(feature_key),
                           host_node, next_tick);
            }
            sim.inject(AerPacket{label_key, static_cast<double>(labels[s]), next_tick},
                       static_cast<CoreId>(label_key), host_node, next_tick);
            sim.run_until_idle();
            for (std::size_t k = 0; k < classes; ++k) {
                trace.steps.push_back({t++, 1.0, sample_deltas[k]});
                delta_sum += sample_deltas[k];
            }
            next_tick = sim.now() + 1;
        }
        trace.epochs.push_back({epoch, delta_sum, std::chrono::duration<double>(Clock::now() - start).count()});
    }

    return DistributedHebbianResult{std::move(models), std::move(trace), sim.stats()};
}

}  // namespace hebgha
