#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_mcn.hpp"

#include <mcn/error.hpp>
#include <mcn/fdi.hpp>
#include <mcn/linking.hpp>

#include <gtest/gtest.h>

using namespace mcn;
using namespace mcn::testing;

namespace {

FaultScenario scenario(std::vector<NodeRef> nodes, bool assumption1 = true) { return {std::move(nodes), assumption1}; }

// Linking from the fault vertices to the outputs of M_lambda by exhaustive search.
int brute_mlambda_linking(const FdiContext& ctx, const FaultScenario& s)
{
    const auto sg = ctx.mlambda_graph(s.nodes, true);
    std::vector<int> sources;
    for (const auto& v : s.nodes) sources.push_back(sg.at(fault_label(v)));
    return brute_force_linking(sg.graph(), sources, sg.vertices_of(VertexKind::Output));
}

// Example 1 with v1 removed from the second actuation component: phi(v1) = {1}, phi(v2) = {2}.
Mcn example1_split_routes()
{
    auto mcn = example1();
    auto& sched = mcn.schedules_r[1];
    for (auto& [slot, edges] : sched.slots)
        std::erase_if(edges, [](const Edge& e) { return e.from == "v1" || e.to == "v1"; });
    std::erase_if(mcn.weights_r[1].weights, [](const auto& kv) { return kv.first.from == "v1" || kv.first.to == "v1"; });
    return mcn;
}

RandomMcnSpec property_spec()
{
    RandomMcnSpec spec;
    spec.max_relays = 5;
    return spec;
}

}  // namespace

TEST(Method, Names)
{
    for (Method m : {Method::Mlambda, Method::Analysis, Method::Both, Method::NoAssumption1})
        EXPECT_EQ(parse_method(to_string(m)), m);
    EXPECT_FALSE(parse_method("theorem").has_value());
}

TEST(Scenario, Label)
{
    EXPECT_EQ(scenario_label(scenario({r_node("v2"), o_node("v4")})), "{v2,v4}");
}

TEST(Scenario, Validation)
{
    FdiContext ctx(example1());
    EXPECT_THROW(ctx.check_scenario(scenario({})), ConfigError);
    EXPECT_THROW(ctx.check_scenario(scenario({r_node("v1"), r_node("v1")})), ConfigError);
    EXPECT_THROW(ctx.check_scenario(scenario({r_node("vu1")})), ConfigError);
    EXPECT_THROW(ctx.check_scenario(scenario({o_node("v1")})), ConfigError);
    EXPECT_NO_THROW(ctx.check_scenario(scenario({r_node("v1"), o_node("v3")})));
}

TEST(Mlambda, Example1SingleNode)
{
    FdiContext ctx(example1());
    const auto rep = ctx.mlambda(scenario({r_node("v1")}));
    EXPECT_TRUE(rep.solvable);
    EXPECT_EQ(rep.k, 1);
    ASSERT_EQ(rep.witness.size(), 1u);
    EXPECT_EQ(rep.witness[0].front(), "f(R:v1)");
}

TEST(Mlambda, Example1MatchesBruteForce)
{
    FdiContext ctx(example1());
    for (int r = 1; r <= 3; ++r)
        for (const auto& s : scenarios_of_size(ctx, r, true)) {
            const auto rep = ctx.mlambda(s);
            EXPECT_EQ(rep.k, brute_mlambda_linking(ctx, s)) << scenario_label(s);
            EXPECT_EQ(rep.solvable, rep.k == r && *rep.observable);
        }
}

TEST(Mlambda, MoreFaultsThanOutputs)
{
    FdiContext ctx(example1());
    for (const auto& s : scenarios_of_size(ctx, 3, true)) {
        const auto rep = ctx.mlambda(s);
        EXPECT_FALSE(rep.solvable);
        EXPECT_LE(rep.k, 2);
        EXPECT_NE(rep.diagnostic.find("condition (ii)"), std::string::npos);
    }
}

TEST(Mlambda, TransposedCouplingIsolatesV2V4)
{
    FdiContext ctx(example1_transposed());
    const auto reports = enumerate_scenarios(ctx, 2, Method::Both);
    ASSERT_EQ(reports.size(), 6u);
    for (const auto& rep : reports) {
        const bool is_v2v4 = scenario_label(rep.scenario) == "{v2,v4}";
        EXPECT_EQ(rep.solvable, !is_v2v4) << scenario_label(rep.scenario);
        EXPECT_EQ(rep.agreement, true);
    }
}

TEST(Analysis, ReportsCopiesAndWitness)
{
    FdiContext ctx(example1());
    const auto rep = ctx.analysis(scenario({r_node("v2"), o_node("v3")}));
    EXPECT_TRUE(rep.solvable);
    const std::vector<std::string> copies{"v2#R2", "v3#O1"};
    EXPECT_EQ(rep.chosen_copies, copies);
    ASSERT_EQ(rep.witness.size(), 2u);
    EXPECT_EQ(rep.witness[0].front(), "v2#R2");
    EXPECT_EQ(rep.witness[0].back().substr(0, 4), "vyc#");
}

TEST(Analysis, AugmentationsMakeEveryPairSolvable)
{
    for (const char* name : {"example1-augmented-r.json", "example1-augmented-o.json"}) {
        FdiContext ctx(load_mcn_file(config_path(name)));
        for (const auto& rep : enumerate_scenarios(ctx, 2, Method::Analysis)) EXPECT_TRUE(rep.solvable) << name;
        FdiContext tctx([&] {
            auto m = load_mcn_file(config_path(name));
            m.plant.A = example1_transposed().plant.A;
            return m;
        }());
        for (const auto& rep : enumerate_scenarios(tctx, 2, Method::Both))
            EXPECT_TRUE(rep.solvable) << name << " " << scenario_label(rep.scenario);
    }
}

TEST(Both, Example1AllScenariosAgree)
{
    FdiContext ctx(example1());
    for (int r = 1; r <= 4; ++r)
        for (const auto& s : scenarios_of_size(ctx, r, true)) {
            EXPECT_TRUE(cross_check_linking(ctx.mcn(), s));
            const auto rep = ctx.both(s);
            EXPECT_EQ(rep.mlambda_linking, rep.analysis_linking);
        }
}

TEST(Enumerate, Counts)
{
    FdiContext ctx(example1());
    const auto one = enumerate_scenarios(ctx, 1, Method::Both);
    ASSERT_EQ(one.size(), 4u);
    for (const auto& rep : one) EXPECT_TRUE(rep.solvable);
    EXPECT_EQ(enumerate_scenarios(ctx, 2, Method::Both).size(), 6u);
    EXPECT_TRUE(enumerate_scenarios(ctx, 5, Method::Both).empty());
    EXPECT_THROW(enumerate_scenarios(ctx, 0, Method::Both), ConfigError);
    EXPECT_THROW(enumerate_scenarios(ctx, 2, Method::Both, 5), AnalysisError);
}

TEST(Enumerate, LexicographicOrder)
{
    FdiContext ctx(example1());
    std::vector<std::string> labels;
    for (const auto& s : scenarios_of_size(ctx, 2, true)) labels.push_back(scenario_label(s));
    const std::vector<std::string> expected{"{v1,v2}", "{v1,v3}", "{v1,v4}", "{v2,v3}", "{v2,v4}", "{v3,v4}"};
    EXPECT_EQ(labels, expected);
}

TEST(Enumerate, ParallelEqualsSerial)
{
    std::mt19937_64 rng(41);
    for (int k = 0; k < 20; ++k) {
        FdiContext ctx(random_mcn(rng, property_spec()));
        for (Method m : {Method::Both, Method::NoAssumption1}) {
            const auto a = enumerate_scenarios(ctx, 2, m);
            const auto b = enumerate_scenarios_serial(ctx, 2, m);
            ASSERT_EQ(a.size(), b.size());
            for (std::size_t j = 0; j < a.size(); ++j) {
                EXPECT_EQ(a[j].solvable, b[j].solvable);
                EXPECT_EQ(a[j].k, b[j].k);
                EXPECT_EQ(a[j].witness, b[j].witness);
                EXPECT_EQ(a[j].diagnostic, b[j].diagnostic);
            }
        }
    }
}

TEST(Sufficient, Example1)
{
    const auto two = sufficient_condition(example1(), 2);
    EXPECT_FALSE(two.holds);
    EXPECT_FALSE(two.gamma_r_ok);
    EXPECT_FALSE(two.below_hypothesis);
    EXPECT_FALSE(two.above_bound);
    ASSERT_FALSE(two.reasons.empty());
    EXPECT_NE(two.reasons[0].find("|Gamma_R(v2)| = 1 < 2"), std::string::npos) << two.reasons[0];

    const auto one = sufficient_condition(example1(), 1);
    EXPECT_TRUE(one.holds);
    EXPECT_TRUE(one.below_hypothesis);
    EXPECT_GE(one.plant_connectivity, 1);

    EXPECT_TRUE(sufficient_condition(example1(), 3).above_bound);
    EXPECT_THROW(sufficient_condition(example1(), 0), ConfigError);
}

TEST(Sufficient, ClosedPlantGraph)
{
    const auto plant = FdiContext(example1()).plant_graph();
    const auto g = closed_plant_graph(plant);
    EXPECT_EQ(g.edge_count(), plant.graph().edge_count() + 4);
    EXPECT_TRUE(g.has_edge(plant.at("yt2"), plant.at("ut1")));
}

TEST(Sufficient, ReplicatedNetworkHolds)
{
    std::mt19937_64 rng(42);
    RandomMcnSpec spec;
    spec.replicate = true;
    spec.plant_density = 1.0;
    spec.max_relays = 4;
    int found = 0;
    for (int k = 0; k < 200 && found < 5; ++k) {
        const auto mcn = random_mcn(rng, spec);
        if (std::min(mcn.plant.m(), mcn.plant.l()) < 2) continue;
        FdiContext ctx(mcn);
        const auto sc = sufficient_condition(ctx, 2);
        if (!sc.holds) continue;
        ++found;
        for (const auto& rep : enumerate_scenarios(ctx, 2, Method::Both)) EXPECT_TRUE(*rep.analysis_linking);
    }
    EXPECT_EQ(found, 5);
}

TEST(NoAssumption1, Example1SharedComponent)
{
    FdiContext ctx(example1());
    const auto rep = ctx.no_assumption1(scenario({r_node("v1"), r_node("v2")}, false));
    EXPECT_FALSE(rep.solvable);
    EXPECT_FALSE(necessary_phi_disjoint(ctx.mcn(), r_node("v1"), r_node("v2")));
    ASSERT_EQ(rep.checks.size(), 3u);
    const auto failing = std::find_if(rep.checks.begin(), rep.checks.end(), [](const ComponentCheck& c) { return !c.passed; });
    ASSERT_NE(failing, rep.checks.end());
    EXPECT_NE(rep.diagnostic.find("condition (ii)"), std::string::npos);
}

TEST(NoAssumption1, DisjointRoutesSolvable)
{
    const auto mcn = example1_split_routes();
    ASSERT_TRUE(validate(mcn).ok());
    FdiContext ctx(mcn);
    EXPECT_TRUE(necessary_phi_disjoint(mcn, r_node("v1"), r_node("v2")));
    const auto rep = ctx.no_assumption1(scenario({r_node("v1"), r_node("v2")}, false));
    EXPECT_TRUE(rep.solvable) << rep.diagnostic;
    EXPECT_EQ(rep.checks.size(), 2u);
}

TEST(NoAssumption1, SingleNodeReducesToPerComponentLinking)
{
    FdiContext ctx(example1());
    const auto s = scenario({r_node("v1")}, false);
    const auto rep = ctx.no_assumption1(s);
    const auto sg = ctx.mlambda_graph(s.nodes, false);
    const auto outputs = sg.vertices_of(VertexKind::Output);
    ASSERT_EQ(rep.checks.size(), 2u);
    for (const auto& c : rep.checks) {
        const std::vector<int> src{sg.at(fault_label(r_node("v1"), c.component))};
        EXPECT_EQ(c.linking, brute_force_linking(sg.graph(), src, outputs));
        EXPECT_EQ(c.without, 0);
    }
    EXPECT_TRUE(rep.solvable);
}

TEST(PhiDisjoint, Examples)
{
    const auto mcn = example1();
    EXPECT_FALSE(necessary_phi_disjoint(mcn, r_node("v1"), r_node("v2")));
    EXPECT_TRUE(necessary_phi_disjoint(mcn, r_node("v2"), o_node("v3")));
    EXPECT_TRUE(necessary_phi_disjoint(mcn, o_node("v3"), o_node("v4")));
    EXPECT_THROW(necessary_phi_disjoint(mcn, r_node("v1"), r_node("v1")), ConfigError);
}

// Property harness over random networks.

TEST(Properties, LinkingConditionsAgree)
{
    std::mt19937_64 rng(43);
    int checked = 0;
    for (int k = 0; k < 200; ++k) {
        FdiContext ctx(random_mcn(rng, property_spec()));
        const int top = std::min<int>(3, static_cast<int>(ctx.candidates().size()));
        for (int r = 1; r <= top; ++r)
            for (const auto& rep : enumerate_scenarios(ctx, r, Method::Both)) {
                ASSERT_EQ(rep.agreement, true);
                ++checked;
            }
    }
    EXPECT_GT(checked, 500);
}

TEST(Properties, SlotPermutationInvariance)
{
    std::mt19937_64 rng(44);
    for (int k = 0; k < 60; ++k) {
        const auto mcn = random_mcn(rng, property_spec());
        FdiContext a(mcn);
        FdiContext b(permute_slots(mcn, rng));
        for (Method m : {Method::Both, Method::NoAssumption1}) {
            const auto ra = enumerate_scenarios(a, 2, m);
            const auto rb = enumerate_scenarios(b, 2, m);
            ASSERT_EQ(ra.size(), rb.size());
            for (std::size_t j = 0; j < ra.size(); ++j) {
                EXPECT_EQ(ra[j].solvable, rb[j].solvable) << scenario_label(ra[j].scenario);
                EXPECT_EQ(ra[j].k, rb[j].k);
            }
        }
    }
}

TEST(Properties, SufficiencyIsSound)
{
    std::mt19937_64 rng(45);
    RandomMcnSpec spec = property_spec();
    int held = 0;
    for (int k = 0; k < 150; ++k) {
        spec.replicate = k % 2 == 0;
        spec.plant_density = k % 3 == 0 ? 1.0 : 0.6;
        FdiContext ctx(random_mcn(rng, spec));
        const int bound = std::min(ctx.mcn().plant.m(), ctx.mcn().plant.l());
        for (int r = 1; r <= bound; ++r) {
            if (!sufficient_condition(ctx, r).holds) continue;
            ++held;
            for (const auto& rep : enumerate_scenarios(ctx, r, Method::Analysis))
                EXPECT_TRUE(rep.solvable) << "instance " << k << " r " << r << " " << scenario_label(rep.scenario);
        }
    }
    EXPECT_GT(held, 20);
}

TEST(Properties, EdgeAdditionIsMonotone)
{
    std::mt19937_64 rng(46);
    for (int k = 0; k < 80; ++k) {
        auto mcn = random_mcn(rng, property_spec());
        FdiContext before(mcn);
        if (!add_scheduled_edge(mcn, rng)) continue;
        FdiContext after(mcn);
        for (int r = 1; r <= 2; ++r)
            for (const auto& s : scenarios_of_size(before, r, true)) {
                const auto a = before.analysis(s);
                const auto b = after.analysis(s);
                EXPECT_GE(b.k, a.k);
                if (a.solvable) EXPECT_TRUE(b.solvable) << "instance " << k << " " << scenario_label(s);
            }
    }
}

TEST(Properties, SharedComponentBlocksIsolation)
{
    std::mt19937_64 rng(47);
    int shared = 0;
    for (int k = 0; k < 120; ++k) {
        FdiContext ctx(random_mcn(rng, property_spec()));
        for (const auto& s : scenarios_of_size(ctx, 2, false)) {
            if (s.nodes[0].side != s.nodes[1].side) continue;
            if (necessary_phi_disjoint(ctx.mcn(), s.nodes[0], s.nodes[1])) continue;
            ++shared;
            EXPECT_FALSE(ctx.no_assumption1(s).solvable) << "instance " << k << " " << scenario_label(s);
        }
    }
    EXPECT_GT(shared, 20);
}
