#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <queue>
#include <tuple>
#include <vector>

#include "hebgha/core.hpp"
#include "hebgha/learning.hpp"

namespace hebgha {

using NodeId = std::size_t;  // y * width + x
using CoreId = std::size_t;  // node * cores_per_node + local core

/// The six torus links, in deterministic priority order. Opposite pairs
/// are E-W, NE-SW, N-S, i.e. inverse(d) = (d + 3) % 6.
enum class Link : std::uint8_t {
    kE = 0,
    kNE = 1,
    kN = 2,
    kW = 3,
    kSW = 4,
    kS = 5,
};

constexpr std::size_t kLinkCount = 6;

Link inverse(Link d);
const char* link_name(Link d);

/// Triangular torus: node (x, y) connects E to (x+1, y), N to (x, y+1),
/// NE to (x+1, y+1) and the three inverses, coordinates wrapped modulo
/// the dimensions.
struct Topology {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t cores_per_node = 0;

    std::size_t node_count() const { return width * height; }
    std::size_t core_count() const { return node_count() * cores_per_node; }

    NodeId node_at(std::size_t x, std::size_t y) const { return y * width + x; }
    std::size_t x_of(NodeId n) const { return n % width; }
    std::size_t y_of(NodeId n) const { return n / width; }

    NodeId neighbor(NodeId n, Link d) const;

    NodeId node_of_core(CoreId c) const { return c / cores_per_node; }
    std::size_t local_core(CoreId c) const { return c % cores_per_node; }
};

Topology build_torus(std::size_t width, std::size_t height, std::size_t cores_per_node);

/// BFS hop distance over the six-link graph.
std::size_t shortest_hops(const Topology& topology, NodeId a, NodeId b);

/// An AER event: source identity, optional 64-bit real payload (a
/// deviation from pure AER, documented because GHA moves residual
/// values), and injection timestamp.
struct AerPacket {
    std::uint32_t key = 0;
    std::optional<double> payload;
    std::uint64_t timestamp = 0;
};

/// Ordered key/mask table; lookup returns the first entry with
/// (key & mask) == (entry.key & entry.mask). No match means the packet
/// is dropped with a diagnostic count.
struct RoutingTable {
    struct Entry {
        std::uint32_t key = 0;
        std::uint32_t mask = 0xFFFFFFFFu;
        std::array<bool, kLinkCount> out_links{};
        std::vector<std::size_t> local_cores;
    };

    std::vector<Entry> entries;

    const Entry* lookup(std::uint32_t key) const;
};

struct EventStats {
    std::uint64_t packets_injected = 0;
    std::uint64_t link_traversals = 0;
    std::uint64_t connection_events = 0;  // deliveries to cores
    std::uint64_t dropped = 0;
    std::uint64_t max_hops = 0;
    std::vector<std::uint64_t> per_link;  // node * 6 + link

    void reset_counters();
};

struct Delivery {
    CoreId core = 0;
    std::uint64_t arrival_tick = 0;
    std::size_t hops = 0;
    AerPacket packet;
    CoreId source = 0;
};

struct DeliveryReport {
    std::vector<Delivery> deliveries;
    std::uint64_t dropped = 0;
};

/// Single-threaded discrete-event simulator. All state mutation happens
/// inside handlers executed one at a time in (tick, sequence) order;
/// sequence numbers break ties by insertion order.
class FabricSimulator {
public:
    explicit FabricSimulator(Topology topology);

    const Topology& topology() const { return topo_; }
    RoutingTable& table(NodeId node) { return tables_[node]; }
    const RoutingTable& table(NodeId node) const { return tables_[node]; }

    const EventStats& stats() const { return stats_; }
    EventStats& stats() { return stats_; }

    /// Tab-separated delivery trace: tick, key, source core, destination
    /// core, hops.
    void set_trace(std::ostream* trace) { trace_ = trace; }

    /// Invoked on every local delivery once the event fires.
    using DeliveryHandler = std::function<void(const Delivery&)>;
    void set_delivery_handler(DeliveryHandler handler) { handler_ = std::move(handler); }

    std::uint64_t now() const { return now_; }

    /// Schedules a packet at the given node's router at the given tick
    /// (must not be in the simulator's past).
    void inject(const AerPacket& packet, CoreId source_core, NodeId at_node, std::uint64_t tick);

    /// Runs events until the queue drains.
    void run_until_idle();

private:
    struct Event {
        std::uint64_t tick = 0;
        std::uint64_t seq = 0;
        NodeId node = 0;
        AerPacket packet;
        CoreId source = 0;
        std::size_t hops = 0;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return std::tie(a.tick, a.seq) > std::tie(b.tick, b.seq);
        }
    };

    void route_at_node(const Event& ev);

    Topology topo_;
    std::vector<RoutingTable> tables_;
    EventStats stats_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t now_ = 0;
    std::uint64_t seq_ = 0;
    std::ostream* trace_ = nullptr;
    DeliveryHandler handler_;
};

/// Programs a multicast tree from the source node to every destination
/// core's node: the union of deterministic minimal paths grafted so each
/// tree node has exactly one parent. One entry per tree node, keyed by
/// `key` with a full mask. A packet with that key injected at the source
/// node traverses each tree link exactly once and reaches each
/// destination core exactly once.
void program_multicast_routes(FabricSimulator& sim, std::uint32_t key, NodeId source_node,
                              const std::vector<CoreId>& destinations);

/// Same, keyed by the source core's own id and rooted at its node.
void program_multicast_routes(FabricSimulator& sim, CoreId source, const std::vector<CoreId>& destinations);

/// The deterministic minimal path the router programming uses: wrap
/// displacements chosen for minimal hop count, then moves emitted
/// longest-dimension-first with ties resolved in link priority order
/// (E before NE before N).
std::vector<Link> deterministic_path(const Topology& topology, NodeId from, NodeId to);

/// Injects one packet at the source core's node and runs to quiescence,
/// reporting every delivery. Routes must already be programmed for the
/// packet's key; an unrouted key drops with a diagnostic count, not a
/// failure.
DeliveryReport inject_and_route(FabricSimulator& sim, const AerPacket& packet, CoreId source_core);

/// Row-to-core mapping: row i lives on core i, nodes enumerated in
/// row-major order and cores filled within a node first.
struct Mapping {
    std::size_t rows = 0;
    std::vector<CoreId> row_core;
};

Mapping map_rows_to_cores(std::size_t m, const Topology& topology);

struct DistributedGhaResult {
    WeightMatrix weights;
    TrainingTrace trace;
    EventStats stats;
};

/// Distributed GHA over the fabric, one output row per core. Per sample:
/// the host (an injector attached to node (0,0)) multicasts the N input
/// values to every row core; each core computes its own output locally;
/// the residual then travels the core chain, each hop applying the same
/// row kernel as the reference trainer. The returned weights are
/// bit-identical to gha_train for the same config and input order. Row
/// collection at the end is a host-side read and does not generate
/// packets.
DistributedGhaResult run_distributed_gha(const std::vector<Vector>& inputs, const GhaConfig& config,
                                         const Topology& topology, std::size_t m, std::ostream* trace = nullptr);

struct DistributedHebbianResult {
    std::vector<HebbianModel> models;  // one per class core
    TrainingTrace trace;
    EventStats stats;
};

/// One-vs-rest Hebbian training over the fabric, one class model per
/// core. Per sample the host multicasts the N feature values plus one
/// label packet to every class core; each core derives its own bipolar
/// target and applies the reference step locally, so the models are
/// bit-identical to the host-side trainer.
DistributedHebbianResult run_distributed_hebbian(const std::vector<Vector>& inputs, const std::vector<int>& labels,
                                                 std::size_t classes, std::size_t epochs, const Topology& topology,
                                                 std::ostream* trace = nullptr);

}  // namespace hebgha
