#include <mcn/model.hpp>

#include <mcn/error.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <queue>

namespace mcn {

std::string_view to_string(Side side)
{
    return side == Side::Controllability ? "controllability" : "observability";
}

char side_tag(Side side) { return side == Side::Controllability ? 'R' : 'O'; }

std::string to_string(const Edge& e) { return "(" + e.from + "," + e.to + ")"; }

std::string node_label(const NodeRef& v) { return v.id; }

bool RadioGraph::has_node(const NodeId& v) const
{
    return std::find(nodes.begin(), nodes.end(), v) != nodes.end();
}

bool RadioGraph::has_edge(const Edge& e) const
{
    return std::find(edges.begin(), edges.end(), e) != edges.end();
}

bool RadioGraph::is_special(const NodeId& v) const
{
    return v == controller || std::find(terminals.begin(), terminals.end(), v) != terminals.end();
}

const NodeId& RadioGraph::source(int i) const
{
    return side == Side::Controllability ? controller : terminals.at(static_cast<std::size_t>(i));
}

const NodeId& RadioGraph::sink(int i) const
{
    return side == Side::Controllability ? terminals.at(static_cast<std::size_t>(i)) : controller;
}

std::optional<int> ComponentSchedule::slot_of(const Edge& e) const
{
    for (const auto& [slot, edges] : slots)
        if (std::find(edges.begin(), edges.end(), e) != edges.end()) return slot;
    return std::nullopt;
}

std::vector<Edge> ComponentSchedule::edges() const
{
    std::vector<Edge> out;
    for (const auto& [slot, es] : slots) out.insert(out.end(), es.begin(), es.end());
    return out;
}

bool ComponentSchedule::empty() const
{
    return std::all_of(slots.begin(), slots.end(), [](const auto& kv) { return kv.second.empty(); });
}

double ComponentWeights::at(const Edge& e) const
{
    auto it = weights.find(e);
    if (it == weights.end()) throw ConfigError("missing weight for link " + to_string(e));
    return it->second;
}

bool RoutingGraph::has_node(const NodeId& v) const
{
    return std::find(nodes.begin(), nodes.end(), v) != nodes.end();
}

std::vector<NodeId> RoutingGraph::successors(const NodeId& v) const
{
    std::vector<NodeId> out;
    for (const auto& e : edges)
        if (e.from == v) out.push_back(e.to);
    return out;
}

void ValidationReport::merge(const ValidationReport& other)
{
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

namespace {

std::string component_tag(Side side, int i) { return std::string(1, side_tag(side)) + std::to_string(i + 1); }

void check_matrix(const Eigen::MatrixXd& M, int rows, int cols, const char* name)
{
    if (M.rows() != rows || M.cols() != cols)
        throw ConfigError("dimension mismatch: plant." + std::string(name) + " is " + std::to_string(M.rows()) + "x" +
                          std::to_string(M.cols()) + ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    if (!M.allFinite()) throw ConfigError("plant." + std::string(name) + " has non-finite entries");
}

void check_graph(const RadioGraph& g, int expected_terminals)
{
    const std::string side(to_string(g.side));
    std::set<NodeId> seen;
    for (const auto& v : g.nodes)
        if (!seen.insert(v).second) throw ConfigError(side + ": node '" + v + "' declared twice");
    if (!g.has_node(g.controller)) throw ConfigError(side + ": unknown node '" + g.controller + "' (controller)");
    if (g.components() != expected_terminals)
        throw ConfigError("dimension mismatch: " + side + " network declares " + std::to_string(g.components()) +
                          " terminals, plant needs " + std::to_string(expected_terminals));
    std::set<NodeId> terms;
    for (const auto& t : g.terminals) {
        if (!g.has_node(t)) throw ConfigError(side + ": unknown node '" + t + "' (terminal)");
        if (t == g.controller) throw ConfigError(side + ": terminal '" + t + "' is the controller");
        if (!terms.insert(t).second) throw ConfigError(side + ": terminal '" + t + "' listed twice");
    }
    std::set<Edge> edges;
    for (const auto& e : g.edges) {
        if (!g.has_node(e.from)) throw ConfigError(side + ": unknown node '" + e.from + "' in edge " + to_string(e));
        if (!g.has_node(e.to)) throw ConfigError(side + ": unknown node '" + e.to + "' in edge " + to_string(e));
        if (e.from == e.to) throw ConfigError(side + ": self-loop " + to_string(e));
        if (!edges.insert(e).second) throw ConfigError(side + ": edge " + to_string(e) + " declared twice");
    }
}

void check_schedules(const RadioGraph& g, const std::vector<ComponentSchedule>& schedules,
                     const std::vector<ComponentWeights>& weights, int frame_length)
{
    const std::string side(to_string(g.side));
    if (static_cast<int>(schedules.size()) != g.components())
        throw ConfigError("dimension mismatch: " + side + " side has " + std::to_string(schedules.size()) +
                          " schedules for " + std::to_string(g.components()) + " components");
    if (static_cast<int>(weights.size()) != g.components())
        throw ConfigError("dimension mismatch: " + side + " side has " + std::to_string(weights.size()) +
                          " weight maps for " + std::to_string(g.components()) + " components");
    for (int i = 0; i < g.components(); ++i) {
        const auto tag = component_tag(g.side, i);
        const auto& sched = schedules[static_cast<std::size_t>(i)];
        if (sched.frame_length != frame_length)
            throw ConfigError(tag + ": frame length " + std::to_string(sched.frame_length) + " differs from " +
                              std::to_string(frame_length));
        std::set<Edge> scheduled;
        for (const auto& [slot, edges] : sched.slots) {
            if (slot < 1 || slot > frame_length)
                throw ConfigError(tag + ": slot " + std::to_string(slot) + " outside 1.." + std::to_string(frame_length));
            for (const auto& e : edges) {
                if (!g.has_node(e.from)) throw ConfigError(tag + ": unknown node '" + e.from + "'");
                if (!g.has_node(e.to)) throw ConfigError(tag + ": unknown node '" + e.to + "'");
                if (!g.has_edge(e)) throw ConfigError(tag + ": link " + to_string(e) + " is not in the radio graph");
                if (!scheduled.insert(e).second) throw ConfigError(tag + ": link " + to_string(e) + " scheduled twice");
            }
        }
        const auto& w = weights[static_cast<std::size_t>(i)];
        for (const auto& [e, value] : w.weights) {
            if (!g.has_edge(e)) throw ConfigError(tag + ": weight on link " + to_string(e) + " not in the radio graph");
            if (!std::isfinite(value)) throw ConfigError(tag + ": weight on link " + to_string(e) + " is not finite");
        }
        for (const auto& e : scheduled)
            if (!w.weights.contains(e)) throw ConfigError(tag + ": missing weight for scheduled link " + to_string(e));
    }
}

}  // namespace

void check_integrity(const Mcn& mcn)
{
    const auto& p = mcn.plant;
    if (p.A.rows() < 1 || p.B.cols() < 1 || p.C.rows() < 1)
        throw ConfigError("dimension mismatch: plant needs n, m, l >= 1");
    check_matrix(p.A, p.n(), p.n(), "A");
    check_matrix(p.B, p.n(), p.m(), "B");
    check_matrix(p.C, p.l(), p.n(), "C");
    if (!(mcn.delta > 0.0) || !std::isfinite(mcn.delta)) throw ConfigError("delta must be a positive real");
    if (mcn.frame_length < 1) throw ConfigError("frame_length must be a positive integer");
    if (mcn.g_r.side != Side::Controllability || mcn.g_o.side != Side::Observability)
        throw ConfigError("radio graphs assigned to the wrong side");
    check_graph(mcn.g_r, p.m());
    check_graph(mcn.g_o, p.l());
    check_schedules(mcn.g_r, mcn.schedules_r, mcn.weights_r, mcn.frame_length);
    check_schedules(mcn.g_o, mcn.schedules_o, mcn.weights_o, mcn.frame_length);
    for (const auto& c : mcn.fault_candidates)
        if (!mcn.graph(c.side).has_node(c.id))
            throw ConfigError("fault candidate: unknown node '" + c.id + "' on " + std::string(to_string(c.side)) + " side");
}

RoutingGraph induced_subgraph(const RadioGraph& g, const ComponentSchedule& sched, int component)
{
    RoutingGraph sub;
    sub.side = g.side;
    sub.component = component;
    sub.source = g.source(component);
    sub.sink = g.sink(component);
    const auto scheduled = sched.edges();
    std::set<NodeId> incident{sub.source, sub.sink};
    for (const auto& e : g.edges) {
        if (std::find(scheduled.begin(), scheduled.end(), e) == scheduled.end()) continue;
        sub.edges.push_back(e);
        incident.insert(e.from);
        incident.insert(e.to);
    }
    for (const auto& v : g.nodes)
        if (incident.contains(v)) sub.nodes.push_back(v);
    return sub;
}

ValidationReport validate_routing_shape(const RoutingGraph& sub)
{
    ValidationReport report;
    const auto tag = component_tag(sub.side, sub.component) + ": ";
    const std::size_t n = sub.nodes.size();
    auto index_of = [&](const NodeId& v) {
        return static_cast<std::size_t>(std::find(sub.nodes.begin(), sub.nodes.end(), v) - sub.nodes.begin());
    };
    std::vector<std::vector<std::size_t>> out(n), in(n);
    for (const auto& e : sub.edges) {
        out[index_of(e.from)].push_back(index_of(e.to));
        in[index_of(e.to)].push_back(index_of(e.from));
    }

    // Kahn
    std::vector<std::size_t> indegree(n);
    for (std::size_t v = 0; v < n; ++v) indegree[v] = in[v].size();
    std::queue<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push(v);
    std::size_t visited = 0;
    while (!ready.empty()) {
        auto v = ready.front();
        ready.pop();
        ++visited;
        for (auto w : out[v])
            if (--indegree[w] == 0) ready.push(w);
    }
    if (visited != n) report.violations.push_back(tag + "cyclic");

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (std::size_t v = 0; v < n; ++v)
        for (auto w : out[v]) parent[find(v)] = find(w);
    std::set<std::size_t> roots;
    for (std::size_t v = 0; v < n; ++v) roots.insert(find(v));
    if (roots.size() > 1) report.violations.push_back(tag + "not weakly connected");

    auto reach = [n](std::size_t start, const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{start};
        seen[start] = true;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto w : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        return seen;
    };
    const auto s = index_of(sub.source);
    const auto t = index_of(sub.sink);
    const auto from_source = reach(s, out);
    const auto to_sink = reach(t, in);
    if (!from_source[t]) {
        report.violations.push_back(tag + "no routing path from " + sub.source + " to " + sub.sink);
        return report;
    }
    for (std::size_t v = 0; v < n; ++v)
        if (!from_source[v] || !to_sink[v])
            report.violations.push_back(tag + "node " + sub.nodes[v] + " not on routing path");
    return report;
}

std::vector<int> phi(const Mcn& mcn, const NodeId& v, Side side)
{
    const auto& g = mcn.graph(side);
    if (!g.has_node(v)) throw ConfigError("unknown node '" + v + "' on " + std::string(to_string(side)) + " side");
    std::vector<int> out;
    const auto& schedules = mcn.schedules(side);
    for (int i = 0; i < g.components(); ++i) {
        const auto edges = schedules[static_cast<std::size_t>(i)].edges();
        if (std::any_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.from == v; })) out.push_back(i);
    }
    return out;
}

std::vector<NodeRef> fault_candidates(const Mcn& mcn)
{
    std::vector<NodeRef> out;
    if (!mcn.fault_candidates.empty()) {
        out = mcn.fault_candidates;
    } else {
        for (Side side : {Side::Controllability, Side::Observability}) {
            const auto& g = mcn.graph(side);
            for (const auto& v : g.nodes)
                if (!g.is_special(v) && !phi(mcn, v, side).empty()) out.push_back({side, v});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ValidationReport validate(const Mcn& mcn)
{
    check_integrity(mcn);
    ValidationReport report;
    for (Side side : {Side::Controllability, Side::Observability}) {
        const auto& g = mcn.graph(side);
        for (int i = 0; i < g.components(); ++i)
            report.merge(validate_routing_shape(induced_subgraph(g, mcn.schedules(side)[static_cast<std::size_t>(i)], i)));
    }
    for (const auto& c : mcn.fault_candidates)
        if (phi(mcn, c.id, c.side).empty())
            report.violations.push_back("fault candidate " + c.id + " routes no component");
    return report;
}

void require_valid(const Mcn& mcn)
{
    const auto report = validate(mcn);
    if (report.ok()) return;
    std::string msg = "invalid configuration:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw ConfigError(msg);
}

NodeRef resolve_node(const Mcn& mcn, std::string_view text)
{
    std::string s(text);
    auto lower_prefix = [&](char tag) {
        return s.size() > 2 && s[1] == ':' && std::tolower(static_cast<unsigned char>(s[0])) == tag;
    };
    if (lower_prefix('r')) {
        NodeId id = s.substr(2);
        if (!mcn.g_r.has_node(id)) throw ConfigError("unknown node '" + id + "' on controllability side");
        return {Side::Controllability, id};
    }
    if (lower_prefix('o')) {
        NodeId id = s.substr(2);
        if (!mcn.g_o.has_node(id)) throw ConfigError("unknown node '" + id + "' on observability side");
        return {Side::Observability, id};
    }
    const bool in_r = mcn.g_r.has_node(s);
    const bool in_o = mcn.g_o.has_node(s);
    if (in_r && in_o) throw ConfigError("node '" + s + "' exists on both sides; prefix it with r: or o:");
    if (in_r) return {Side::Controllability, s};
    if (in_o) return {Side::Observability, s};
    throw ConfigError("unknown node '" + s + "'");
}

}  // namespace mcn
