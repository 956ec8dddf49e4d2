#include <mcn/linking.hpp>

#include <mcn/error.hpp>

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mcn {

UnitFlow::UnitFlow(int nodes) : head_(static_cast<std::size_t>(nodes)) {}

int UnitFlow::add_node()
{
    head_.emplace_back();
    return size() - 1;
}

int UnitFlow::add_arc(int from, int to, int capacity)
{
    const int a = static_cast<int>(arcs_.size());
    arcs_.push_back({to, capacity, capacity});
    arcs_.push_back({from, 0, 0});
    head_[static_cast<std::size_t>(from)].push_back(a);
    head_[static_cast<std::size_t>(to)].push_back(a + 1);
    return a;
}

int UnitFlow::run(int source, int sink, int limit)
{
    int total = 0;
    std::vector<int> via(head_.size());
    while (limit < 0 || total < limit) {
        std::fill(via.begin(), via.end(), -1);
        std::queue<int> queue;
        queue.push(source);
        via[static_cast<std::size_t>(source)] = -2;
        while (!queue.empty() && via[static_cast<std::size_t>(sink)] == -1) {
            const int v = queue.front();
            queue.pop();
            for (int a : head_[static_cast<std::size_t>(v)]) {
                const auto& arc = arcs_[static_cast<std::size_t>(a)];
                if (arc.capacity > 0 && via[static_cast<std::size_t>(arc.to)] == -1) {
                    via[static_cast<std::size_t>(arc.to)] = a;
                    queue.push(arc.to);
                }
            }
        }
        if (via[static_cast<std::size_t>(sink)] == -1) break;
        int bottleneck = std::numeric_limits<int>::max();
        for (int v = sink; v != source;) {
            const int a = via[static_cast<std::size_t>(v)];
            bottleneck = std::min(bottleneck, arcs_[static_cast<std::size_t>(a)].capacity);
            v = arcs_[static_cast<std::size_t>(a ^ 1)].to;
        }
        if (limit >= 0) bottleneck = std::min(bottleneck, limit - total);
        for (int v = sink; v != source;) {
            const int a = via[static_cast<std::size_t>(v)];
            arcs_[static_cast<std::size_t>(a)].capacity -= bottleneck;
            arcs_[static_cast<std::size_t>(a ^ 1)].capacity += bottleneck;
            v = arcs_[static_cast<std::size_t>(a ^ 1)].to;
        }
        total += bottleneck;
    }
    return total;
}

int UnitFlow::flow(int arc) const
{
    const auto& a = arcs_[static_cast<std::size_t>(arc)];
    return a.initial - a.capacity;
}

std::vector<int> UnitFlow::saturated_out(int node) const
{
    std::vector<int> out;
    for (int a : head_[static_cast<std::size_t>(node)])
        if ((a & 1) == 0 && flow(a) > 0) out.push_back(a);
    return out;
}

namespace {

int in_node(int v) { return 2 * v; }
int out_node(int v) { return 2 * v + 1; }

// Node-split network of g with unit vertex and arc capacities.
UnitFlow split_network(const Digraph& g)
{
    UnitFlow net(2 * g.size());
    for (int v = 0; v < g.size(); ++v) net.add_arc(in_node(v), out_node(v));
    for (int v = 0; v < g.size(); ++v)
        for (int w : g.out(v)) net.add_arc(out_node(v), in_node(w));
    return net;
}

// Walks the flow from in(start) through split vertices until it reaches `sink_node`.
std::vector<int> trace(const UnitFlow& net, int start, int sink_node, int graph_size)
{
    std::vector<int> path{start};
    int v = start;
    for (int guard = 0; guard <= graph_size; ++guard) {
        const auto arcs = net.saturated_out(out_node(v));
        if (arcs.empty()) break;
        const int to = net.arc_to(arcs.front());
        if (to == sink_node) return path;
        v = to / 2;
        path.push_back(v);
    }
    throw InternalInconsistency("linking flow does not decompose into paths");
}

void verify_paths(const Digraph& g, const std::vector<std::vector<int>>& paths, std::span<const int> sources,
                  std::span<const int> sinks)
{
    std::vector<bool> used(static_cast<std::size_t>(g.size()), false);
    for (const auto& p : paths) {
        if (p.empty()) continue;
        if (std::find(sources.begin(), sources.end(), p.front()) == sources.end() ||
            std::find(sinks.begin(), sinks.end(), p.back()) == sinks.end())
            throw InternalInconsistency("linking path has wrong endpoints");
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (used[static_cast<std::size_t>(p[k])]) throw InternalInconsistency("linking paths are not vertex-disjoint");
            used[static_cast<std::size_t>(p[k])] = true;
            if (k > 0 && !g.has_edge(p[k - 1], p[k])) throw InternalInconsistency("linking path uses a missing edge");
        }
    }
}

}  // namespace

Linking max_linking(const Digraph& g, std::span<const int> sources, std::span<const int> sinks)
{
    UnitFlow net = split_network(g);
    const int s = net.add_node();
    const int t = net.add_node();
    std::vector<int> src(sources.begin(), sources.end());
    std::sort(src.begin(), src.end());
    src.erase(std::unique(src.begin(), src.end()), src.end());
    std::vector<int> snk(sinks.begin(), sinks.end());
    std::sort(snk.begin(), snk.end());
    snk.erase(std::unique(snk.begin(), snk.end()), snk.end());
    for (int v : src) net.add_arc(s, in_node(v));
    for (int v : snk) net.add_arc(out_node(v), t);

    Linking result;
    result.size = net.run(s, t);
    for (int a : net.saturated_out(s)) result.paths.push_back(trace(net, net.arc_to(a) / 2, t, g.size()));
    if (static_cast<int>(result.paths.size()) != result.size)
        throw InternalInconsistency("linking witness count differs from flow value");
    verify_paths(g, result.paths, sources, sinks);
    return result;
}

GroupedLinking grouped_linking(const Digraph& g, const std::vector<std::vector<int>>& groups, std::span<const int> sinks)
{
    UnitFlow net = split_network(g);
    const int s = net.add_node();
    const int t = net.add_node();
    std::vector<int> selector;
    for (const auto& group : groups) {
        if (group.empty()) throw std::invalid_argument("grouped linking: empty group");
        const int sel = net.add_node();
        selector.push_back(sel);
        net.add_arc(s, sel);
        for (int v : group) net.add_arc(sel, in_node(v));
    }
    std::vector<int> snk(sinks.begin(), sinks.end());
    std::sort(snk.begin(), snk.end());
    snk.erase(std::unique(snk.begin(), snk.end()), snk.end());
    for (int v : snk) net.add_arc(out_node(v), t);

    GroupedLinking result;
    result.size = net.run(s, t);
    result.chosen.assign(groups.size(), -1);
    result.paths.resize(groups.size());
    std::vector<int> all_sources;
    for (std::size_t k = 0; k < groups.size(); ++k) {
        all_sources.insert(all_sources.end(), groups[k].begin(), groups[k].end());
        const auto arcs = net.saturated_out(selector[k]);
        if (arcs.empty()) continue;
        if (arcs.size() > 1) throw InternalInconsistency("selector passes more than one unit");
        const int start = net.arc_to(arcs.front()) / 2;
        result.chosen[k] = start;
        result.paths[k] = trace(net, start, t, g.size());
    }
    int used = 0;
    for (int c : result.chosen) used += c >= 0 ? 1 : 0;
    if (used != result.size) throw InternalInconsistency("grouped linking witness count differs from flow value");
    verify_paths(g, result.paths, all_sources, sinks);
    return result;
}

GroupedLinking has_grouped_linking(const AnalysisGraph& ag, const std::vector<NodeRef>& fault_nodes)
{
    std::vector<std::vector<int>> groups;
    for (const auto& v : fault_nodes) {
        auto copies = ag.fault_copies(v);
        if (copies.empty()) throw AnalysisError("node " + v.id + " has no copy routing a component");
        groups.push_back(std::move(copies));
    }
    return grouped_linking(ag.graph.graph(), groups, ag.sinks);
}

int local_connectivity(const Digraph& g, int s, int t)
{
    if (s == t) throw std::invalid_argument("local_connectivity: s == t");
    UnitFlow net = split_network(g);
    return net.run(out_node(s), in_node(t));
}

namespace {

int connectivity_from(const Digraph& g, int s, int bound)
{
    int best = bound;
    for (int t = 0; t < g.size(); ++t)
        if (t != s) best = std::min(best, local_connectivity(g, s, t));
    return best;
}

void require_two_vertices(const Digraph& g)
{
    if (g.size() < 2) throw std::invalid_argument("vertex connectivity needs at least two vertices");
}

}  // namespace

int vertex_connectivity_serial(const Digraph& g)
{
    require_two_vertices(g);
    int best = g.size() - 1;
    for (int s = 0; s < g.size(); ++s) best = connectivity_from(g, s, best);
    return best;
}

int vertex_connectivity(const Digraph& g)
{
    require_two_vertices(g);
    int best = g.size() - 1;
    const int n = g.size();
#pragma omp parallel for schedule(dynamic) reduction(min : best)
    for (int s = 0; s < n; ++s) best = std::min(best, connectivity_from(g, s, n - 1));
    return best;
}

int bipartite_matching(const std::vector<std::vector<int>>& adj, int right_size)
{
    std::vector<int> match_right(static_cast<std::size_t>(right_size), -1);
    std::vector<int> seen(static_cast<std::size_t>(right_size), -1);
    int size = 0;
    std::function<bool(int, int)> augment = [&](int l, int stamp) {
        for (int r : adj[static_cast<std::size_t>(l)]) {
            if (seen[static_cast<std::size_t>(r)] == stamp) continue;
            seen[static_cast<std::size_t>(r)] = stamp;
            if (match_right[static_cast<std::size_t>(r)] < 0 || augment(match_right[static_cast<std::size_t>(r)], stamp)) {
                match_right[static_cast<std::size_t>(r)] = l;
                return true;
            }
        }
        return false;
    };
    for (int l = 0; l < static_cast<int>(adj.size()); ++l)
        if (augment(l, l)) ++size;
    return size;
}

ObservabilityReport structural_observability(const StructuredGraph& sg)
{
    const auto& g = sg.graph();
    auto is_state = [&](int v) {
        const auto k = sg.vertex(v).kind;
        return k == VertexKind::PlantState || k == VertexKind::NetworkState;
    };
    std::vector<int> outputs = sg.vertices_of(VertexKind::Output);
    if (outputs.empty()) outputs = sg.vertices_of(VertexKind::OutputInterconnect);
    std::vector<bool> is_output(static_cast<std::size_t>(g.size()), false);
    for (int y : outputs) is_output[static_cast<std::size_t>(y)] = true;

    std::vector<int> states;
    std::vector<int> row(static_cast<std::size_t>(g.size()), -1);
    for (int v = 0; v < g.size(); ++v)
        if (is_state(v)) {
            row[static_cast<std::size_t>(v)] = static_cast<int>(states.size());
            states.push_back(v);
        }
    for (std::size_t k = 0; k < outputs.size(); ++k)
        row[static_cast<std::size_t>(outputs[k])] = static_cast<int>(states.size() + k);

    ObservabilityReport report;
    report.states = static_cast<int>(states.size());

    // (a) reverse reachability from the outputs
    std::vector<bool> reaches(static_cast<std::size_t>(g.size()), false);
    std::vector<int> stack(outputs.begin(), outputs.end());
    for (int y : outputs) reaches[static_cast<std::size_t>(y)] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : g.in(v))
            if (!reaches[static_cast<std::size_t>(w)]) {
                reaches[static_cast<std::size_t>(w)] = true;
                stack.push_back(w);
            }
    }
    for (int x : states)
        if (!reaches[static_cast<std::size_t>(x)]) report.unreached_states.push_back(x);

    // (b) successors of each state among states and outputs, looking through
    // vertices that are neither (interconnects)
    std::vector<std::vector<int>> adj(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
        std::vector<int> todo(g.out(states[k]).begin(), g.out(states[k]).end());
        while (!todo.empty()) {
            const int w = todo.back();
            todo.pop_back();
            if (seen[static_cast<std::size_t>(w)]) continue;
            seen[static_cast<std::size_t>(w)] = true;
            if (row[static_cast<std::size_t>(w)] >= 0) {
                adj[k].push_back(row[static_cast<std::size_t>(w)]);
            } else if (sg.vertex(w).kind != VertexKind::Fault && sg.vertex(w).kind != VertexKind::Input) {
                for (int u : g.out(w)) todo.push_back(u);
            }
        }
        std::sort(adj[k].begin(), adj[k].end());
    }
    report.matching = bipartite_matching(adj, static_cast<int>(states.size() + outputs.size()));
    report.observable = report.unreached_states.empty() && report.matching == report.states;
    return report;
}

bool structurally_observable(const StructuredGraph& sg) { return structural_observability(sg).observable; }

}  // namespace mcn
