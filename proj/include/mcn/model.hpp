#pragma once

// Domain types for a multi-hop control network: an LTI plant wired to a
// controller through two scheduled, weighted relay networks.

#include <Eigen/Core>

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mcn {

enum class Side { Controllability, Observability };
enum class PlantKind { Continuous, Discrete };

std::string_view to_string(Side side);
/// "R" or "O"; used in vertex labels and reports.
char side_tag(Side side);

struct Plant
{
    PlantKind kind = PlantKind::Continuous;
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;

    int n() const { return static_cast<int>(A.rows()); }
    int m() const { return static_cast<int>(B.cols()); }
    int l() const { return static_cast<int>(C.rows()); }
};

using NodeId = std::string;

struct Edge
{
    NodeId from;
    NodeId to;

    auto operator<=>(const Edge&) const = default;
};

std::string to_string(const Edge& e);

/// A communication node together with the network it belongs to.
struct NodeRef
{
    Side side = Side::Controllability;
    NodeId id;

    auto operator<=>(const NodeRef&) const = default;
};

/// Radio connectivity graph of one side. `terminals` are the actuators
/// (controllability side) or the sensors (observability side), in component order.
struct RadioGraph
{
    Side side = Side::Controllability;
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
    NodeId controller;
    std::vector<NodeId> terminals;

    bool has_node(const NodeId& v) const;
    bool has_edge(const Edge& e) const;
    bool is_special(const NodeId& v) const;
    int components() const { return static_cast<int>(terminals.size()); }

    /// Where data of component i enters the network: the controller on the
    /// controllability side, sensor i on the observability side.
    const NodeId& source(int i) const;
    /// Where data of component i leaves the network.
    const NodeId& sink(int i) const;
};

/// Periodic slot schedule of one component. Slots are numbered 1..frame_length.
struct ComponentSchedule
{
    int frame_length = 1;
    std::map<int, std::vector<Edge>> slots;

    std::optional<int> slot_of(const Edge& e) const;
    /// Union of the scheduled edges, ordered by (slot, insertion).
    std::vector<Edge> edges() const;
    bool empty() const;
};

struct ComponentWeights
{
    std::map<Edge, double> weights;

    double at(const Edge& e) const;
};

struct Mcn
{
    Plant plant;
    RadioGraph g_r;
    RadioGraph g_o;
    std::vector<ComponentSchedule> schedules_r;
    std::vector<ComponentSchedule> schedules_o;
    std::vector<ComponentWeights> weights_r;
    std::vector<ComponentWeights> weights_o;
    double delta = 1.0;
    int frame_length = 1;
    /// Explicit candidate list; empty means "every relay that routes some component".
    std::vector<NodeRef> fault_candidates;

    double frame_duration() const { return frame_length * delta; }

    const RadioGraph& graph(Side s) const { return s == Side::Controllability ? g_r : g_o; }
    const std::vector<ComponentSchedule>& schedules(Side s) const
    {
        return s == Side::Controllability ? schedules_r : schedules_o;
    }
    const std::vector<ComponentWeights>& weights(Side s) const
    {
        return s == Side::Controllability ? weights_r : weights_o;
    }
    int components(Side s) const { return graph(s).components(); }
};

/// Subgraph G(eta_i) kept by the schedule of one component, with its routing endpoints.
struct RoutingGraph
{
    Side side = Side::Controllability;
    int component = 0;
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
    NodeId source;
    NodeId sink;

    bool has_node(const NodeId& v) const;
    std::vector<NodeId> successors(const NodeId& v) const;
};

struct ValidationReport
{
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    void merge(const ValidationReport& other);
};

/// Referential and dimensional integrity of the tuple. Throws ConfigError
/// on the first violation ("unknown node", "link scheduled twice", ...).
void check_integrity(const Mcn& mcn);

RoutingGraph induced_subgraph(const RadioGraph& g, const ComponentSchedule& sched, int component);

/// DAG, weakly connected, every node on a source->sink path.
ValidationReport validate_routing_shape(const RoutingGraph& sub);

/// Routing-shape validation of every component plus candidate checks.
ValidationReport validate(const Mcn& mcn);

/// Throws ConfigError listing every violation when validate() is not clean.
void require_valid(const Mcn& mcn);

/// Components (0-based) for which v has an outgoing scheduled edge. Throws
/// ConfigError for a node unknown on that side.
std::vector<int> phi(const Mcn& mcn, const NodeId& v, Side side);

/// Effective fault candidates, ordered by side (controllability first) then id.
std::vector<NodeRef> fault_candidates(const Mcn& mcn);

/// Resolves "v2", "r:v2" or "o:v2" to a node. Throws ConfigError when the
/// id is unknown or exists on both sides without a prefix.
NodeRef resolve_node(const Mcn& mcn, std::string_view text);

std::string node_label(const NodeRef& v);

}  // namespace mcn
