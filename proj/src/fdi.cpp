#include <mcn/fdi.hpp>

#include <mcn/error.hpp>

#include <algorithm>
#include <exception>
#include <set>

namespace mcn {

std::string_view to_string(Method method)
{
    switch (method) {
        case Method::Mlambda: return "mlambda";
        case Method::Analysis: return "analysis";
        case Method::Both: return "both";
        case Method::NoAssumption1: return "no-assumption1";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view text)
{
    for (auto m : {Method::Mlambda, Method::Analysis, Method::Both, Method::NoAssumption1})
        if (to_string(m) == text) return m;
    return std::nullopt;
}

std::string scenario_label(const FaultScenario& s)
{
    std::string out = "{";
    for (std::size_t k = 0; k < s.nodes.size(); ++k) {
        if (k > 0) out += ",";
        out += s.nodes[k].id;
    }
    return out + "}";
}

namespace {

std::vector<NodeId> ids_on(const std::vector<NodeRef>& nodes, Side side)
{
    std::vector<NodeId> out;
    for (const auto& v : nodes)
        if (v.side == side) out.push_back(v.id);
    return out;
}

std::vector<std::vector<std::string>> labelled(const StructuredGraph& g, const std::vector<std::vector<int>>& paths)
{
    std::vector<std::vector<std::string>> out;
    for (const auto& p : paths) {
        if (p.empty()) continue;
        auto& labels = out.emplace_back();
        for (int v : p) labels.push_back(g.vertex(v).label);
    }
    return out;
}

std::string linking_diagnostic(int k, int r)
{
    return "condition (ii): maximum linking " + std::to_string(k) + " < r = " + std::to_string(r);
}

const char* kNotObservable = "condition (i): not structurally observable";

}  // namespace

FdiContext::FdiContext(Mcn mcn) : mcn_(std::move(mcn))
{
    require_valid(mcn_);
    candidates_ = fault_candidates(mcn_);
    r_ = network_transfers(mcn_, Side::Controllability, mcn_.weights_r, ids_on(candidates_, Side::Controllability));
    o_ = network_transfers(mcn_, Side::Observability, mcn_.weights_o, ids_on(candidates_, Side::Observability));
    plant_ = build_plant_structured(plant_model(mcn_));
    analysis_ = build_analysis_graph(mcn_, plant_);
    observability_ = structural_observability(build_mcn_structured(r_, plant_, o_, {}, true));
}

StructuredGraph FdiContext::mlambda_graph(const std::vector<NodeRef>& faults, bool merge) const
{
    return build_mcn_structured(r_, plant_, o_, faults, merge);
}

void FdiContext::check_scenario(const FaultScenario& s) const
{
    if (s.nodes.empty()) throw ConfigError("fault scenario is empty");
    std::set<NodeRef> seen;
    for (const auto& v : s.nodes) {
        if (!seen.insert(v).second) throw ConfigError("node " + v.id + " repeated in fault scenario");
        if (std::find(candidates_.begin(), candidates_.end(), v) == candidates_.end())
            throw ConfigError("node " + v.id + " is not a fault candidate");
    }
}

FdiReport FdiContext::mlambda(const FaultScenario& s) const
{
    check_scenario(s);
    const auto sg = mlambda_graph(s.nodes, true);
    std::vector<int> sources;
    for (const auto& v : s.nodes) sources.push_back(sg.at(fault_label(v)));
    const auto sinks = sg.vertices_of(VertexKind::Output);
    const auto lk = max_linking(sg.graph(), sources, sinks);

    FdiReport rep;
    rep.scenario = s;
    rep.method = Method::Mlambda;
    rep.r = s.r();
    rep.k = lk.size;
    rep.observable = observability_.observable;
    rep.mlambda_linking = lk.size == rep.r;
    rep.solvable = *rep.observable && *rep.mlambda_linking;
    rep.witness = labelled(sg, lk.paths);
    if (!*rep.observable)
        rep.diagnostic = kNotObservable;
    else if (!*rep.mlambda_linking)
        rep.diagnostic = linking_diagnostic(rep.k, rep.r);
    return rep;
}

FdiReport FdiContext::analysis(const FaultScenario& s) const
{
    check_scenario(s);
    FdiReport rep;
    rep.scenario = s;
    rep.method = Method::Analysis;
    rep.r = s.r();
    for (const auto& v : s.nodes)
        if (analysis_.fault_copies(v).empty()) {
            rep.analysis_linking = false;
            rep.diagnostic = "Gamma(" + v.id + ") is empty";
            return rep;
        }
    const auto gl = has_grouped_linking(analysis_, s.nodes);
    rep.k = gl.size;
    rep.analysis_linking = gl.size == rep.r;
    rep.solvable = *rep.analysis_linking;
    for (int c : gl.chosen) rep.chosen_copies.push_back(c >= 0 ? analysis_.graph.vertex(c).label : "-");
    rep.witness = labelled(analysis_.graph, gl.paths);
    if (!rep.solvable) rep.diagnostic = linking_diagnostic(rep.k, rep.r);
    return rep;
}

FdiReport FdiContext::both(const FaultScenario& s) const
{
    const auto a = mlambda(s);
    auto b = analysis(s);
    if (a.mlambda_linking != b.analysis_linking)
        throw InternalInconsistency("linking conditions disagree on " + scenario_label(s) + ": M_lambda linking " +
                                    std::to_string(a.k) + ", analysis-graph linking " + std::to_string(b.k));
    b.method = Method::Both;
    b.observable = a.observable;
    b.mlambda_linking = a.mlambda_linking;
    b.agreement = true;
    b.solvable = a.solvable;
    b.diagnostic = a.diagnostic;
    return b;
}

FdiReport FdiContext::no_assumption1(const FaultScenario& s) const
{
    check_scenario(s);
    const auto sg = mlambda_graph(s.nodes, false);
    const auto sinks = sg.vertices_of(VertexKind::Output);

    struct Signal
    {
        std::size_t node;
        int component;
        int vertex;
    };
    std::vector<Signal> all;
    for (std::size_t k = 0; k < s.nodes.size(); ++k)
        for (int i : phi(mcn_, s.nodes[k].id, s.nodes[k].side))
            all.push_back({k, i, sg.at(fault_label(s.nodes[k], i))});

    FdiReport rep;
    rep.scenario = s;
    rep.scenario.assumption1 = false;
    rep.method = Method::NoAssumption1;
    rep.r = s.r();
    rep.k = rep.r;
    rep.observable = observability_.observable;
    bool all_passed = true;
    std::optional<Linking> shown;
    for (const auto& target : all) {
        std::vector<int> kept, reduced;
        for (const auto& sig : all) {
            if (sig.node == target.node && sig.component != target.component) continue;
            kept.push_back(sig.vertex);
            if (sig.vertex != target.vertex) reduced.push_back(sig.vertex);
        }
        auto lk = max_linking(sg.graph(), kept, sinks);
        ComponentCheck check;
        check.node = s.nodes[target.node];
        check.component = target.component;
        check.linking = lk.size;
        check.without = max_linking(sg.graph(), reduced, sinks).size;
        check.passed = check.linking >= rep.r && check.linking > check.without;
        rep.k = std::min(rep.k, check.linking);
        if (!check.passed && all_passed) {
            all_passed = false;
            rep.diagnostic = "condition (ii) fails for f(" + check.node.id + "," + std::to_string(check.component + 1) +
                             "): linking " + std::to_string(check.linking) + ", without it " +
                             std::to_string(check.without);
            shown = std::move(lk);
        } else if (!shown) {
            shown = std::move(lk);
        }
        rep.checks.push_back(check);
    }
    if (shown) rep.witness = labelled(sg, shown->paths);
    rep.solvable = *rep.observable && all_passed;
    if (!*rep.observable) rep.diagnostic = kNotObservable;
    return rep;
}

FdiReport FdiContext::run(const FaultScenario& s, Method method) const
{
    switch (method) {
        case Method::Mlambda: return mlambda(s);
        case Method::Analysis: return analysis(s);
        case Method::Both: return both(s);
        case Method::NoAssumption1: return no_assumption1(s);
    }
    throw std::logic_error("unknown method");
}

FdiReport fdi_solvable_mlambda(const Mcn& mcn, const FaultScenario& s) { return FdiContext(mcn).mlambda(s); }
FdiReport fdi_solvable_analysis(const Mcn& mcn, const FaultScenario& s) { return FdiContext(mcn).analysis(s); }
FdiReport fdi_solvable_no_assumption1(const Mcn& mcn, const FaultScenario& s)
{
    return FdiContext(mcn).no_assumption1(s);
}

bool cross_check_linking(const Mcn& mcn, const FaultScenario& s)
{
    return FdiContext(mcn).both(s).agreement.value_or(false);
}

std::vector<FaultScenario> scenarios_of_size(const FdiContext& ctx, int r, bool assumption1, std::uint64_t cap)
{
    if (r < 1) throw ConfigError("number of faults must be at least 1");
    const auto& c = ctx.candidates();
    const int n = static_cast<int>(c.size());
    if (r > n) return {};
    std::uint64_t count = 1;
    for (int k = 1; k <= r; ++k) {
        count = count * static_cast<std::uint64_t>(n - r + k) / static_cast<std::uint64_t>(k);
        if (count > cap)
            throw AnalysisError("more than " + std::to_string(cap) + " scenarios of size " + std::to_string(r));
    }
    std::vector<FaultScenario> out;
    out.reserve(count);
    std::vector<int> idx(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) idx[static_cast<std::size_t>(k)] = k;
    while (true) {
        FaultScenario s;
        s.assumption1 = assumption1;
        for (int k : idx) s.nodes.push_back(c[static_cast<std::size_t>(k)]);
        out.push_back(std::move(s));
        int pos = r - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - r + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int k = pos + 1; k < r; ++k) idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
    }
    return out;
}

std::vector<FdiReport> enumerate_scenarios_serial(const FdiContext& ctx, int r, Method method, std::uint64_t cap)
{
    std::vector<FdiReport> out;
    for (const auto& s : scenarios_of_size(ctx, r, method != Method::NoAssumption1, cap)) out.push_back(ctx.run(s, method));
    return out;
}

std::vector<FdiReport> enumerate_scenarios(const FdiContext& ctx, int r, Method method, std::uint64_t cap)
{
    const auto scenarios = scenarios_of_size(ctx, r, method != Method::NoAssumption1, cap);
    const auto count = static_cast<std::int64_t>(scenarios.size());
    std::vector<FdiReport> out(scenarios.size());
    std::vector<std::exception_ptr> errors(scenarios.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < count; ++k) {
        try {
            out[static_cast<std::size_t>(k)] = ctx.run(scenarios[static_cast<std::size_t>(k)], method);
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

Digraph closed_plant_graph(const StructuredGraph& plant)
{
    Digraph g = plant.graph();
    for (int y : plant.vertices_of(VertexKind::OutputInterconnect))
        for (int u : plant.vertices_of(VertexKind::InputInterconnect)) g.add_edge(y, u);
    return g;
}

SufficientCondition sufficient_condition(const FdiContext& ctx, int r)
{
    if (r < 1) throw ConfigError("number of faults must be at least 1");
    const auto& mcn = ctx.mcn();
    SufficientCondition sc;
    sc.r = r;
    const int bound = std::min(mcn.plant.m(), mcn.plant.l());
    sc.below_hypothesis = r < bound;
    sc.above_bound = r > bound;
    sc.gamma_r_ok = sc.gamma_o_ok = true;
    for (const auto& v : ctx.candidates()) {
        const auto copies = static_cast<int>(ctx.analysis_graph().copies(v).size());
        if (copies >= r) continue;
        (v.side == Side::Controllability ? sc.gamma_r_ok : sc.gamma_o_ok) = false;
        sc.reasons.push_back("|Gamma_" + std::string(1, side_tag(v.side)) + "(" + v.id + ")| = " +
                             std::to_string(copies) + " < " + std::to_string(r));
    }
    sc.plant_connectivity = vertex_connectivity(closed_plant_graph(ctx.plant_graph()));
    sc.connectivity_ok = sc.plant_connectivity >= r;
    if (!sc.connectivity_ok)
        sc.reasons.push_back("plant connectivity " + std::to_string(sc.plant_connectivity) + " < " + std::to_string(r));
    sc.holds = sc.gamma_r_ok && sc.gamma_o_ok && sc.connectivity_ok;
    return sc;
}

SufficientCondition sufficient_condition(const Mcn& mcn, int r) { return sufficient_condition(FdiContext(mcn), r); }

bool necessary_phi_disjoint(const Mcn& mcn, const NodeRef& v1, const NodeRef& v2)
{
    if (v1 == v2) throw ConfigError("scenario nodes must be distinct");
    const auto a = phi(mcn, v1.id, v1.side);
    const auto b = phi(mcn, v2.id, v2.side);
    if (v1.side != v2.side) return true;
    for (int i : a)
        if (std::find(b.begin(), b.end(), i) != b.end()) return false;
    return true;
}

}  // namespace mcn
