#pragma once

// Vertex-disjoint path engines: linkings, grouped linkings, vertex
// connectivity and structural observability.

#include <mcn/digraph.hpp>
#include <mcn/structured.hpp>

#include <span>
#include <vector>

namespace mcn {

/// Unit-capacity augmenting-path max flow. Arcs are scanned in insertion
/// order, so results are reproducible.
class UnitFlow
{
 public:
    explicit UnitFlow(int nodes);

    int add_node();
    /// Returns the arc index of the forward arc.
    int add_arc(int from, int to, int capacity = 1);
    /// Augments until no path remains or `limit` units flow.
    int run(int source, int sink, int limit = -1);

    int size() const { return static_cast<int>(head_.size()); }
    int flow(int arc) const;
    /// Forward arcs leaving `node` that carry flow.
    std::vector<int> saturated_out(int node) const;
    int arc_to(int arc) const { return arcs_[static_cast<std::size_t>(arc)].to; }

 private:
    struct Arc
    {
        int to;
        int capacity;
        int initial;
    };
    std::vector<std::vector<int>> head_;
    std::vector<Arc> arcs_;
};

struct Linking
{
    int size = 0;
    /// Vertex sequences, each from a source to a sink, ordered by source.
    std::vector<std::vector<int>> paths;
};

/// Maximum family of pairwise vertex-disjoint simple paths from `sources`
/// to `sinks`. A vertex that is both source and sink is a path of length 0.
/// The witness is verified before returning; a broken witness throws
/// InternalInconsistency.
Linking max_linking(const Digraph& g, std::span<const int> sources, std::span<const int> sinks);

struct GroupedLinking
{
    int size = 0;
    /// chosen[k] is the vertex picked from groups[k], or -1 when unused.
    std::vector<int> chosen;
    std::vector<std::vector<int>> paths;  ///< paths[k] starts at chosen[k]; empty when unused
};

/// Largest linking that uses at most one vertex from each group, via a
/// selector gadget in front of the node-split network. Throws
/// std::invalid_argument for an empty group.
GroupedLinking grouped_linking(const Digraph& g, const std::vector<std::vector<int>>& groups, std::span<const int> sinks);

/// Grouped check on the analysis graph: one routing copy per fault node, linking to the sinks.
GroupedLinking has_grouped_linking(const AnalysisGraph& ag, const std::vector<NodeRef>& fault_nodes);

/// Maximum number of internally vertex-disjoint s -> t paths; a direct edge counts as one.
int local_connectivity(const Digraph& g, int s, int t);

/// min over ordered pairs s != t of local_connectivity. Throws
/// std::invalid_argument below two vertices.
int vertex_connectivity(const Digraph& g);
int vertex_connectivity_serial(const Digraph& g);

struct ObservabilityReport
{
    bool observable = false;
    int states = 0;
    int matching = 0;                  ///< size of the maximum state matching
    std::vector<int> unreached_states; ///< states with no path to an output
};

/// (a) every state reaches an output and (b) the state columns of [A; C]
/// admit a full matching. Interconnect vertices are contracted away. Output
/// vertices are the Output kind, or the output interconnects when the graph
/// has none (a bare plant graph).
ObservabilityReport structural_observability(const StructuredGraph& sg);
bool structurally_observable(const StructuredGraph& sg);

/// Size of a maximum bipartite matching; adj[l] lists right vertices of left vertex l.
int bipartite_matching(const std::vector<std::vector<int>>& adj, int right_size);

}  // namespace mcn
