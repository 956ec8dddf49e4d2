#include <mcn/structured.hpp>

#include <mcn/error.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mcn {

std::string_view to_string(VertexKind kind)
{
    switch (kind) {
        case VertexKind::Input: return "input";
        case VertexKind::InputInterconnect: return "input-interconnect";
        case VertexKind::OutputInterconnect: return "output-interconnect";
        case VertexKind::NetworkState: return "network-state";
        case VertexKind::PlantState: return "plant-state";
        case VertexKind::Output: return "output";
        case VertexKind::Fault: return "fault";
        case VertexKind::NetworkNode: return "network-node";
    }
    return "unknown";
}

int StructuredGraph::add_vertex(VertexInfo info)
{
    if (by_label_.contains(info.label)) throw std::logic_error("duplicate vertex label " + info.label);
    const int v = graph_.add_vertex();
    by_label_.emplace(info.label, v);
    info_.push_back(std::move(info));
    return v;
}

int StructuredGraph::ensure_vertex(VertexInfo info)
{
    if (auto v = find(info.label)) return *v;
    return add_vertex(std::move(info));
}

std::optional<int> StructuredGraph::find(std::string_view label) const
{
    auto it = by_label_.find(label);
    if (it == by_label_.end()) return std::nullopt;
    return it->second;
}

int StructuredGraph::at(std::string_view label) const
{
    auto v = find(label);
    if (!v) throw std::out_of_range("no vertex labelled " + std::string(label));
    return *v;
}

bool StructuredGraph::has_edge(std::string_view from, std::string_view to) const
{
    auto a = find(from);
    auto b = find(to);
    return a && b && graph_.has_edge(*a, *b);
}

std::vector<int> StructuredGraph::vertices_of(VertexKind kind) const
{
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (vertex(v).kind == kind) out.push_back(v);
    return out;
}

void StructuredGraph::merge(const StructuredGraph& other)
{
    std::vector<int> map(static_cast<std::size_t>(other.size()));
    for (int v = 0; v < other.size(); ++v) map[static_cast<std::size_t>(v)] = ensure_vertex(other.vertex(v));
    for (const auto& [a, b] : other.graph().edges())
        graph_.add_edge(map[static_cast<std::size_t>(a)], map[static_cast<std::size_t>(b)]);
}

NetworkTransfers network_transfers(const Mcn& mcn, Side side, const std::vector<ComponentWeights>& weights,
                                   const std::vector<NodeId>& fault_nodes)
{
    const auto& g = mcn.graph(side);
    const auto& schedules = mcn.schedules(side);
    NetworkTransfers t;
    t.side = side;
    for (int i = 0; i < g.components(); ++i) {
        const auto& sched = schedules[static_cast<std::size_t>(i)];
        auto sub = induced_subgraph(g, sched, i);
        t.blocks.push_back(block_transfer(sub, weights[static_cast<std::size_t>(i)], sched, sub.source, sub.sink));
        t.subgraphs.push_back(std::move(sub));
    }
    for (const auto& v : fault_nodes) {
        auto& per_component = t.faults[v];
        for (int i : phi(mcn, v, side)) {
            const auto& sub = t.subgraphs[static_cast<std::size_t>(i)];
            per_component.emplace(i, fault_transfer(sub, weights[static_cast<std::size_t>(i)],
                                                    schedules[static_cast<std::size_t>(i)], v, sub.sink));
        }
    }
    return t;
}

std::string fault_label(const NodeRef& v, std::optional<int> component)
{
    std::string label = "f(";
    label += side_tag(v.side);
    label += ":" + v.id;
    if (component) label += "," + std::to_string(*component + 1);
    return label + ")";
}

namespace {

std::string state_label(Side side, int component, int d)
{
    return std::string("x") + side_tag(side) + std::to_string(component + 1) + "_" + std::to_string(d);
}

std::string input_label(int i) { return "u" + std::to_string(i + 1); }
std::string ut_label(int i) { return "ut" + std::to_string(i + 1); }
std::string yt_label(int j) { return "yt" + std::to_string(j + 1); }
std::string output_label(int j) { return "y" + std::to_string(j + 1); }

bool structurally_nonzero(double value, double scale)
{
    return std::abs(value) > kStructuralZeroTolerance * scale && value != 0.0;
}

}  // namespace

StructuredGraph build_block_structured(const NetworkTransfers& t, const std::vector<NodeId>& fault_nodes,
                                       bool merge_fault_components)
{
    StructuredGraph sg;
    const Side side = t.side;
    const bool actuation = side == Side::Controllability;
    const int count = static_cast<int>(t.blocks.size());

    // entry vertex (u_i or y~_i) and exit vertex (u~_i or y_i) per component
    std::vector<int> entry(static_cast<std::size_t>(count)), exit(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        entry[static_cast<std::size_t>(i)] =
            actuation ? sg.add_vertex({VertexKind::Input, input_label(i), side, i, i + 1, {}})
                      : sg.add_vertex({VertexKind::OutputInterconnect, yt_label(i), side, i, i + 1, {}});
    for (int i = 0; i < count; ++i) {
        const auto& f = t.blocks[static_cast<std::size_t>(i)];
        for (int d = 1; d <= f.max_delay(); ++d)
            sg.add_vertex({VertexKind::NetworkState, state_label(side, i, d), side, i, d, {}});
    }
    for (int i = 0; i < count; ++i)
        exit[static_cast<std::size_t>(i)] =
            actuation ? sg.add_vertex({VertexKind::InputInterconnect, ut_label(i), side, i, i + 1, {}})
                      : sg.add_vertex({VertexKind::Output, output_label(i), side, i, i + 1, {}});

    for (int i = 0; i < count; ++i) {
        const auto& f = t.blocks[static_cast<std::size_t>(i)];
        for (int d = 1; d <= f.max_delay(); ++d) {
            const int x = sg.at(state_label(side, i, d));
            if (f.at(d) != 0.0) sg.add_edge(entry[static_cast<std::size_t>(i)], x);
            if (d > 1) sg.add_edge(x, sg.at(state_label(side, i, d - 1)));
        }
        sg.add_edge(sg.at(state_label(side, i, 1)), exit[static_cast<std::size_t>(i)]);
    }

    for (const auto& v : fault_nodes) {
        auto it = t.faults.find(v);
        if (it == t.faults.end()) throw AnalysisError("no fault transfers computed for node " + v);
        std::optional<int> merged;
        if (merge_fault_components)
            merged = sg.add_vertex({VertexKind::Fault, fault_label({side, v}), side, -1, -1, v});
        for (const auto& [i, g] : it->second) {
            const int f = merged ? *merged
                                 : sg.add_vertex({VertexKind::Fault, fault_label({side, v}, i), side, i, -1, v});
            for (int d = 1; d <= g.max_delay(); ++d)
                if (g.at(d) != 0.0) sg.add_edge(f, sg.at(state_label(side, i, d)));
        }
    }
    return sg;
}

StructuredGraph build_block_structured(const Mcn& mcn, Side side, const std::vector<NodeId>& fault_nodes,
                                       bool merge_fault_components)
{
    require_valid(mcn);
    const auto candidates = fault_candidates(mcn);
    for (const auto& v : fault_nodes)
        if (std::find(candidates.begin(), candidates.end(), NodeRef{side, v}) == candidates.end())
            throw ConfigError("node " + v + " is not a fault candidate on the " + std::string(to_string(side)) + " side");
    const auto t = network_transfers(mcn, side, mcn.weights(side), fault_nodes);
    return build_block_structured(t, fault_nodes, merge_fault_components);
}

StructuredGraph build_plant_structured(const StateSpace& plant_d)
{
    StructuredGraph sg;
    const auto n = plant_d.states();
    const auto m = plant_d.inputs();
    const auto l = plant_d.outputs();
    for (int i = 0; i < m; ++i) sg.add_vertex({VertexKind::InputInterconnect, ut_label(i), Side::Controllability, i, i + 1, {}});
    for (int p = 0; p < n; ++p)
        sg.add_vertex({VertexKind::PlantState, "x" + std::to_string(p + 1), Side::Controllability, -1, p + 1, {}});
    for (int j = 0; j < l; ++j) sg.add_vertex({VertexKind::OutputInterconnect, yt_label(j), Side::Observability, j, j + 1, {}});
    auto scale = [](const Eigen::MatrixXd& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); };
    const double sa = scale(plant_d.A), sb = scale(plant_d.B), sc = scale(plant_d.C);
    const int x0 = m;
    const int y0 = m + n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (structurally_nonzero(plant_d.A(i, j), sa)) sg.add_edge(x0 + j, x0 + i);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k)
            if (structurally_nonzero(plant_d.B(i, k), sb)) sg.add_edge(k, x0 + i);
    for (int j = 0; j < l; ++j)
        for (int i = 0; i < n; ++i)
            if (structurally_nonzero(plant_d.C(j, i), sc)) sg.add_edge(x0 + i, y0 + j);
    return sg;
}

namespace {

std::vector<int> weak_labels(const Digraph& g, const std::vector<bool>& removed)
{
    std::vector<int> label(static_cast<std::size_t>(g.size()), -1);
    int next = 0;
    for (int s = 0; s < g.size(); ++s) {
        if (removed[static_cast<std::size_t>(s)] || label[static_cast<std::size_t>(s)] >= 0) continue;
        std::vector<int> stack{s};
        label[static_cast<std::size_t>(s)] = next;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (const auto* adj : {&g.out(v), &g.in(v)})
                for (int w : *adj)
                    if (!removed[static_cast<std::size_t>(w)] && label[static_cast<std::size_t>(w)] < 0) {
                        label[static_cast<std::size_t>(w)] = next;
                        stack.push_back(w);
                    }
        }
        ++next;
    }
    return label;
}

// Every interconnect vertex must separate its own block from the rest of the
// cascade once fault vertices (which may fan out across components) are set aside.
void assert_interconnect_bridges(const StructuredGraph& sg)
{
    const auto& g = sg.graph();
    std::vector<bool> base(static_cast<std::size_t>(g.size()), false);
    for (int f : sg.vertices_of(VertexKind::Fault)) base[static_cast<std::size_t>(f)] = true;
    auto check = [&](VertexKind cut_kind, VertexKind end_kind) {
        for (int cut : sg.vertices_of(cut_kind)) {
            const auto& info = sg.vertex(cut);
            const auto end = sg.find(end_kind == VertexKind::Input ? input_label(info.component) : output_label(info.component));
            if (!end) continue;
            auto removed = base;
            removed[static_cast<std::size_t>(cut)] = true;
            const auto label = weak_labels(g, removed);
            const int own = label[static_cast<std::size_t>(*end)];
            for (int v = 0; v < g.size(); ++v) {
                if (removed[static_cast<std::size_t>(v)] || label[static_cast<std::size_t>(v)] != own) continue;
                const auto& w = sg.vertex(v);
                const bool foreign = w.kind == VertexKind::PlantState || w.kind == VertexKind::Input ||
                                     w.kind == VertexKind::Output || w.kind == VertexKind::InputInterconnect ||
                                     w.kind == VertexKind::OutputInterconnect ||
                                     (w.kind == VertexKind::NetworkState && (w.side != info.side || w.component != info.component));
                if (foreign && v != *end)
                    throw InternalInconsistency("interconnect vertex " + info.label + " is not a bridge (reaches " +
                                                w.label + ")");
            }
        }
    };
    check(VertexKind::InputInterconnect, VertexKind::Input);
    check(VertexKind::OutputInterconnect, VertexKind::Output);
}

}  // namespace

StructuredGraph build_mcn_structured(const NetworkTransfers& r, const StructuredGraph& plant, const NetworkTransfers& o,
                                     const std::vector<NodeRef>& fault_nodes, bool merge_fault_components)
{
    std::vector<NodeId> r_faults, o_faults;
    for (const auto& v : fault_nodes) (v.side == Side::Controllability ? r_faults : o_faults).push_back(v.id);
    StructuredGraph sg = build_block_structured(r, r_faults, merge_fault_components);
    sg.merge(plant);
    sg.merge(build_block_structured(o, o_faults, merge_fault_components));
    assert_interconnect_bridges(sg);
    return sg;
}

StructuredGraph build_mcn_structured(const Mcn& mcn, const std::vector<NodeRef>& fault_nodes, bool merge_fault_components)
{
    require_valid(mcn);
    const auto candidates = fault_candidates(mcn);
    std::vector<NodeId> r_faults, o_faults;
    for (const auto& v : fault_nodes) {
        if (std::find(candidates.begin(), candidates.end(), v) == candidates.end())
            throw ConfigError("node " + v.id + " is not a fault candidate");
        (v.side == Side::Controllability ? r_faults : o_faults).push_back(v.id);
    }
    const auto r = network_transfers(mcn, Side::Controllability, mcn.weights_r, r_faults);
    const auto o = network_transfers(mcn, Side::Observability, mcn.weights_o, o_faults);
    return build_mcn_structured(r, build_plant_structured(plant_model(mcn)), o, fault_nodes, merge_fault_components);
}

std::string copy_label(const NodeId& v, Side side, int component)
{
    return v + "#" + side_tag(side) + std::to_string(component + 1);
}

std::vector<int> AnalysisGraph::copies(const NodeRef& v) const
{
    const auto& map = gamma(v.side);
    auto it = map.find(v.id);
    return it == map.end() ? std::vector<int>{} : it->second;
}

std::vector<int> AnalysisGraph::fault_copies(const NodeRef& v) const
{
    std::vector<int> out;
    for (int c : copies(v))
        if (routes[static_cast<std::size_t>(c)]) out.push_back(c);
    return out;
}

AnalysisGraph build_analysis_graph(const Mcn& mcn, const StructuredGraph& plant)
{
    AnalysisGraph ag;
    auto& sg = ag.graph;
    std::vector<bool> routes;
    auto add_side = [&](Side side) {
        const auto& g = mcn.graph(side);
        auto& gamma = side == Side::Controllability ? ag.gamma_r : ag.gamma_o;
        for (int i = 0; i < g.components(); ++i) {
            const auto sub = induced_subgraph(g, mcn.schedules(side)[static_cast<std::size_t>(i)], i);
            for (const auto& v : sub.nodes) {
                const int c = sg.add_vertex({VertexKind::NetworkNode, copy_label(v, side, i), side, i, -1, v});
                gamma[v].push_back(c);
                routes.resize(static_cast<std::size_t>(sg.size()), false);
                routes[static_cast<std::size_t>(c)] = !sub.successors(v).empty();
            }
            for (const auto& e : sub.edges) sg.add_edge(copy_label(e.from, side, i), copy_label(e.to, side, i));
        }
    };
    add_side(Side::Controllability);
    sg.merge(plant);
    add_side(Side::Observability);
    routes.resize(static_cast<std::size_t>(sg.size()), false);
    ag.routes = std::move(routes);

    for (int i = 0; i < mcn.g_r.components(); ++i) {
        const auto ut = sg.find(ut_label(i));
        if (!ut) throw InternalInconsistency("plant graph lacks " + ut_label(i));
        sg.add_edge(sg.at(copy_label(mcn.g_r.sink(i), Side::Controllability, i)), *ut);
    }
    for (int j = 0; j < mcn.g_o.components(); ++j) {
        const auto yt = sg.find(yt_label(j));
        if (!yt) throw InternalInconsistency("plant graph lacks " + yt_label(j));
        sg.add_edge(*yt, sg.at(copy_label(mcn.g_o.source(j), Side::Observability, j)));
        ag.sinks.push_back(sg.at(copy_label(mcn.g_o.sink(j), Side::Observability, j)));
    }
    return ag;
}

AnalysisGraph build_analysis_graph(const Mcn& mcn)
{
    require_valid(mcn);
    return build_analysis_graph(mcn, build_plant_structured(plant_model(mcn)));
}

std::string export_graph(const StructuredGraph& g, std::string_view name)
{
    std::ostringstream os;
    os << "# mcn-fdi graph v1\n";
    os << "graph " << name << "\n";
    os << "vertices " << g.size() << "\n";
    for (int v = 0; v < g.size(); ++v) os << "v " << v << " " << to_string(g.vertex(v).kind) << " " << g.vertex(v).label << "\n";
    const auto edges = g.graph().edges();
    os << "edges " << edges.size() << "\n";
    for (const auto& [a, b] : edges) os << "e " << a << " " << b << "\n";
    return os.str();
}

}  // namespace mcn
