#include "random_mcn.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mcn::testing {

double random_weight(std::mt19937_64& rng)
{
    const double a = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    return std::bernoulli_distribution(0.5)(rng) ? -a : a;
}

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Eigen::MatrixXd random_pattern(std::mt19937_64& rng, int rows, int cols, double density)
{
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
    std::bernoulli_distribution keep(density);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (keep(rng)) M(r, c) = random_weight(rng);
    return M;
}

// Routes of one component: a union of source -> sink paths through relays
// visited in one fixed order, so the union is acyclic.
std::vector<Edge> component_routes(std::mt19937_64& rng, const NodeId& source, const NodeId& sink,
                                   std::vector<NodeId> relays, const RandomMcnSpec& spec)
{
    std::set<Edge> edges;
    std::shuffle(relays.begin(), relays.end(), rng);
    if (spec.replicate) {
        for (const auto& v : relays) {
            edges.insert({source, v});
            edges.insert({v, sink});
        }
        if (relays.size() < 2) edges.insert({source, sink});
    } else {
        const auto keep = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(relays.size())));
        relays.resize(keep);
        const int routes = uniform_int(rng, 1, spec.max_paths);
        std::bernoulli_distribution take(0.5);
        for (int p = 0; p < routes; ++p) {
            NodeId at = source;
            for (const auto& v : relays)
                if (take(rng)) {
                    edges.insert({at, v});
                    at = v;
                }
            edges.insert({at, sink});
        }
    }
    return {edges.begin(), edges.end()};
}

void build_side(std::mt19937_64& rng, Mcn& mcn, Side side, int components, const RandomMcnSpec& spec)
{
    const bool ctrl = side == Side::Controllability;
    RadioGraph g;
    g.side = side;
    g.controller = ctrl ? "c" : "yc";
    const int k = uniform_int(rng, 1, spec.max_relays);
    std::vector<NodeId> relays;
    for (int v = 1; v <= k; ++v) relays.push_back((ctrl ? "p" : "q") + std::to_string(v));
    g.nodes.push_back(g.controller);
    for (int i = 1; i <= components; ++i) {
        g.terminals.push_back((ctrl ? "a" : "s") + std::to_string(i));
        g.nodes.push_back(g.terminals.back());
    }
    g.nodes.insert(g.nodes.end(), relays.begin(), relays.end());

    std::set<Edge> all;
    std::vector<ComponentSchedule> schedules;
    std::vector<ComponentWeights> weights;
    for (int i = 0; i < components; ++i) {
        const auto& src = ctrl ? g.controller : g.terminals[static_cast<std::size_t>(i)];
        const auto& snk = ctrl ? g.terminals[static_cast<std::size_t>(i)] : g.controller;
        ComponentSchedule sched;
        sched.frame_length = mcn.frame_length;
        ComponentWeights w;
        for (const auto& e : component_routes(rng, src, snk, relays, spec)) {
            sched.slots[uniform_int(rng, 1, mcn.frame_length)].push_back(e);
            w.weights[e] = random_weight(rng);
            all.insert(e);
        }
        schedules.push_back(std::move(sched));
        weights.push_back(std::move(w));
    }
    g.edges.assign(all.begin(), all.end());
    if (ctrl) {
        mcn.g_r = std::move(g);
        mcn.schedules_r = std::move(schedules);
        mcn.weights_r = std::move(weights);
    } else {
        mcn.g_o = std::move(g);
        mcn.schedules_o = std::move(schedules);
        mcn.weights_o = std::move(weights);
    }
}

}  // namespace

Mcn random_mcn(std::mt19937_64& rng, const RandomMcnSpec& spec)
{
    Mcn mcn;
    const int n = uniform_int(rng, 1, spec.max_n);
    const int m = uniform_int(rng, 1, spec.max_m);
    const int l = uniform_int(rng, 1, spec.max_l);
    auto& p = mcn.plant;
    p.kind = std::bernoulli_distribution(spec.continuous_fraction)(rng) ? PlantKind::Continuous : PlantKind::Discrete;
    p.A = random_pattern(rng, n, n, spec.plant_density);
    p.B = random_pattern(rng, n, m, spec.plant_density);
    p.C = random_pattern(rng, l, n, spec.plant_density);
    for (int c = 0; c < m; ++c)
        if (p.B.col(c).isZero()) p.B(uniform_int(rng, 0, n - 1), c) = random_weight(rng);
    for (int r = 0; r < l; ++r)
        if (p.C.row(r).isZero()) p.C(r, uniform_int(rng, 0, n - 1)) = random_weight(rng);
    mcn.frame_length = uniform_int(rng, 1, spec.max_frame);
    mcn.delta = 0.05;
    build_side(rng, mcn, Side::Controllability, m, spec);
    build_side(rng, mcn, Side::Observability, l, spec);
    return mcn;
}

Mcn permute_slots(const Mcn& mcn, std::mt19937_64& rng)
{
    Mcn out = mcn;
    for (auto* list : {&out.schedules_r, &out.schedules_o})
        for (auto& sched : *list) {
            std::vector<int> perm(static_cast<std::size_t>(sched.frame_length));
            std::iota(perm.begin(), perm.end(), 1);
            std::shuffle(perm.begin(), perm.end(), rng);
            std::map<int, std::vector<Edge>> slots;
            for (auto& [h, edges] : sched.slots) slots[perm[static_cast<std::size_t>(h - 1)]] = std::move(edges);
            sched.slots = std::move(slots);
        }
    return out;
}

bool add_scheduled_edge(Mcn& mcn, std::mt19937_64& rng)
{
    struct Choice
    {
        Side side;
        int component;
        Edge edge;
    };
    std::vector<Choice> choices;
    for (Side side : {Side::Controllability, Side::Observability}) {
        const auto& g = mcn.graph(side);
        for (int i = 0; i < g.components(); ++i) {
            const auto& sched = mcn.schedules(side)[static_cast<std::size_t>(i)];
            const auto sub = induced_subgraph(g, sched, i);
            for (const auto& u : sub.nodes)
                for (const auto& w : sub.nodes) {
                    if (u == w || u == sub.sink || w == sub.source || sched.slot_of({u, w})) continue;
                    // w must not reach u
                    std::vector<NodeId> stack{w};
                    std::set<NodeId> seen{w};
                    bool cycle = false;
                    while (!stack.empty() && !cycle) {
                        const auto x = stack.back();
                        stack.pop_back();
                        for (const auto& y : sub.successors(x)) {
                            if (y == u) cycle = true;
                            if (seen.insert(y).second) stack.push_back(y);
                        }
                    }
                    if (!cycle) choices.push_back({side, i, {u, w}});
                }
        }
    }
    if (choices.empty()) return false;
    const auto& c = choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)];
    auto& g = c.side == Side::Controllability ? mcn.g_r : mcn.g_o;
    if (!g.has_edge(c.edge)) g.edges.push_back(c.edge);
    auto& sched = (c.side == Side::Controllability ? mcn.schedules_r : mcn.schedules_o)[static_cast<std::size_t>(c.component)];
    sched.slots[std::uniform_int_distribution<int>(1, sched.frame_length)(rng)].push_back(c.edge);
    auto& w = (c.side == Side::Controllability ? mcn.weights_r : mcn.weights_o)[static_cast<std::size_t>(c.component)];
    w.weights[c.edge] = random_weight(rng);
    return true;
}

Digraph random_digraph(std::mt19937_64& rng, int n, double density)
{
    Digraph g(n);
    std::bernoulli_distribution keep(density);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && keep(rng)) g.add_edge(u, v);
    return g;
}

Digraph random_dag(std::mt19937_64& rng, int n, double density)
{
    Digraph g(n);
    std::bernoulli_distribution keep(density);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (keep(rng)) g.add_edge(u, v);
    return g;
}

}  // namespace mcn::testing
