#pragma once

// Structured-graph representations: per-block graphs of the relay networks,
// the plant graph, their union M_lambda, and the disjoint-union analysis
// graph over the scheduled subgraphs.

#include <mcn/digraph.hpp>
#include <mcn/dynamics.hpp>
#include <mcn/model.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcn {

enum class VertexKind {
    Input,               ///< u_i
    InputInterconnect,   ///< u~_i, actuator side of the plant
    OutputInterconnect,  ///< y~_i, sensor side of the plant
    NetworkState,        ///< x_{i,d} of a relay block
    PlantState,
    Output,  ///< y_i, controller side of the sensing network
    Fault,
    NetworkNode,  ///< copy of a communication node in the analysis graph
};

std::string_view to_string(VertexKind kind);

struct VertexInfo
{
    VertexKind kind = VertexKind::NetworkState;
    std::string label;
    Side side = Side::Controllability;
    int component = -1;  ///< 0-based component, -1 when not applicable
    int index = -1;      ///< delay d, plant state index, ... (1-based)
    NodeId node;         ///< communication node for faults and copies
};

class StructuredGraph
{
 public:
    /// Adds a vertex; throws std::logic_error on a duplicate label.
    int add_vertex(VertexInfo info);
    /// Returns the vertex with this label, adding it if absent.
    int ensure_vertex(VertexInfo info);
    void add_edge(int from, int to) { graph_.add_edge(from, to); }
    void add_edge(std::string_view from, std::string_view to) { graph_.add_edge(at(from), at(to)); }

    std::optional<int> find(std::string_view label) const;
    int at(std::string_view label) const;
    bool has_edge(std::string_view from, std::string_view to) const;

    const Digraph& graph() const { return graph_; }
    const VertexInfo& vertex(int v) const { return info_[static_cast<std::size_t>(v)]; }
    int size() const { return graph_.size(); }
    std::vector<int> vertices_of(VertexKind kind) const;

    /// Union by vertex label.
    void merge(const StructuredGraph& other);

 private:
    Digraph graph_;
    std::vector<VertexInfo> info_;
    std::map<std::string, int, std::less<>> by_label_;
};

/// Controllability and observability FIR data computed from one set of weights.
struct NetworkTransfers
{
    Side side = Side::Controllability;
    std::vector<RoutingGraph> subgraphs;
    std::vector<FirTransfer> blocks;
    /// fault transfers per node and per component in phi(node)
    std::map<NodeId, std::map<int, FirTransfer>> faults;
};

NetworkTransfers network_transfers(const Mcn& mcn, Side side, const std::vector<ComponentWeights>& weights,
                                   const std::vector<NodeId>& fault_nodes);

std::string fault_label(const NodeRef& v, std::optional<int> component = std::nullopt);

/// Block graph (u_i, x_{i,d}, u~_i, faults) of one relay network. With
/// `merge_fault_components` a single f_v fans out to every component routed
/// via v; otherwise one f_{v,i} per component.
StructuredGraph build_block_structured(const Mcn& mcn, Side side, const std::vector<NodeId>& fault_nodes,
                                       bool merge_fault_components);
StructuredGraph build_block_structured(const NetworkTransfers& t, const std::vector<NodeId>& fault_nodes,
                                       bool merge_fault_components);

/// u~ -> x for nonzero B, x_j -> x_i for nonzero A(i,j), x -> y~ for nonzero C.
StructuredGraph build_plant_structured(const StateSpace& plant_d);

/// Entries at or below this fraction of the largest magnitude count as structural zeros.
inline constexpr double kStructuralZeroTolerance = 1e-13;

/// Union of both block graphs and the plant graph. Throws InternalInconsistency
/// when an interconnect vertex stops separating its block from the plant.
StructuredGraph build_mcn_structured(const Mcn& mcn, const std::vector<NodeRef>& fault_nodes, bool merge_fault_components);
StructuredGraph build_mcn_structured(const NetworkTransfers& r, const StructuredGraph& plant, const NetworkTransfers& o,
                                     const std::vector<NodeRef>& fault_nodes, bool merge_fault_components);

struct AnalysisGraph
{
    StructuredGraph graph;
    std::map<NodeId, std::vector<int>> gamma_r;
    std::map<NodeId, std::vector<int>> gamma_o;
    /// controller copies v_{y,c,j}, one per sensing component
    std::vector<int> sinks;
    /// copy vertex has an outgoing scheduled edge inside its own component
    std::vector<bool> routes;

    const std::map<NodeId, std::vector<int>>& gamma(Side side) const
    {
        return side == Side::Controllability ? gamma_r : gamma_o;
    }
    std::vector<int> copies(const NodeRef& v) const;
    /// Copies in the components that v routes (those carrying a fault signal).
    std::vector<int> fault_copies(const NodeRef& v) const;
};

AnalysisGraph build_analysis_graph(const Mcn& mcn);
AnalysisGraph build_analysis_graph(const Mcn& mcn, const StructuredGraph& plant);

std::string copy_label(const NodeId& v, Side side, int component);

/// Plain-text export, see docs/graph-format.md.
std::string export_graph(const StructuredGraph& g, std::string_view name);

}  // namespace mcn
