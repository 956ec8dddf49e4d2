#pragma once

// Decision procedures for detection and isolation of node failures.

#include <mcn/linking.hpp>
#include <mcn/model.hpp>
#include <mcn/structured.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcn {

enum class Method { Mlambda, Analysis, Both, NoAssumption1 };

std::string_view to_string(Method method);
/// "mlambda", "analysis", "both" or "no-assumption1".
std::optional<Method> parse_method(std::string_view text);

struct FaultScenario
{
    std::vector<NodeRef> nodes;
    bool assumption1 = true;

    int r() const { return static_cast<int>(nodes.size()); }
};

std::string scenario_label(const FaultScenario& s);

/// One per-component check of the per-component (no assumption1) condition.
struct ComponentCheck
{
    NodeRef node;
    int component = 0;  ///< 0-based
    int linking = 0;    ///< max linking from the reduced fault set
    int without = 0;    ///< same, with f_{v,i} itself removed
    bool passed = false;
};

struct FdiReport
{
    FaultScenario scenario;
    Method method = Method::Mlambda;
    bool solvable = false;
    int r = 0;
    int k = 0;                       ///< linking size found
    std::optional<bool> observable;  ///< condition (i), when evaluated
    std::optional<bool> mlambda_linking;
    std::optional<bool> analysis_linking;
    std::optional<bool> agreement;   ///< M_lambda and analysis-graph linkings agree, when both ran
    std::vector<std::string> chosen_copies;
    std::vector<std::vector<std::string>> witness;
    std::vector<ComponentCheck> checks;
    std::string diagnostic;          ///< violated condition, empty when solvable
};

/// Precomputed structures for one network; all queries are const and safe to
/// run concurrently.
class FdiContext
{
 public:
    /// Validates the network (ConfigError on failure) and precomputes the
    /// transfers of every fault candidate, the plant graph and the analysis graph.
    explicit FdiContext(Mcn mcn);

    const Mcn& mcn() const { return mcn_; }
    const std::vector<NodeRef>& candidates() const { return candidates_; }
    const StructuredGraph& plant_graph() const { return plant_; }
    const AnalysisGraph& analysis_graph() const { return analysis_; }
    const ObservabilityReport& observability() const { return observability_; }
    const NetworkTransfers& transfers(Side side) const { return side == Side::Controllability ? r_ : o_; }

    StructuredGraph mlambda_graph(const std::vector<NodeRef>& faults, bool merge) const;

    /// Throws ConfigError for an empty, repeated or non-candidate node list.
    void check_scenario(const FaultScenario& s) const;

    FdiReport mlambda(const FaultScenario& s) const;
    FdiReport analysis(const FaultScenario& s) const;
    /// Runs both; throws InternalInconsistency when the linking conditions disagree.
    FdiReport both(const FaultScenario& s) const;
    FdiReport no_assumption1(const FaultScenario& s) const;
    FdiReport run(const FaultScenario& s, Method method) const;

 private:
    Mcn mcn_;
    std::vector<NodeRef> candidates_;
    NetworkTransfers r_;
    NetworkTransfers o_;
    StructuredGraph plant_;
    AnalysisGraph analysis_;
    ObservabilityReport observability_;
};

FdiReport fdi_solvable_mlambda(const Mcn& mcn, const FaultScenario& s);
FdiReport fdi_solvable_analysis(const Mcn& mcn, const FaultScenario& s);
FdiReport fdi_solvable_no_assumption1(const Mcn& mcn, const FaultScenario& s);
/// True when both linking conditions agree; throws InternalInconsistency otherwise.
bool cross_check_linking(const Mcn& mcn, const FaultScenario& s);

inline constexpr std::uint64_t kDefaultScenarioCap = 1'000'000;

/// r-subsets of the candidates in lexicographic order (controllability side
/// first, then by id). Throws AnalysisError above `cap` subsets.
std::vector<FaultScenario> scenarios_of_size(const FdiContext& ctx, int r, bool assumption1,
                                             std::uint64_t cap = kDefaultScenarioCap);

/// One report per r-subset, in scenario order. Evaluated in parallel; the
/// serial variant is the reference implementation.
std::vector<FdiReport> enumerate_scenarios(const FdiContext& ctx, int r, Method method,
                                           std::uint64_t cap = kDefaultScenarioCap);
std::vector<FdiReport> enumerate_scenarios_serial(const FdiContext& ctx, int r, Method method,
                                                  std::uint64_t cap = kDefaultScenarioCap);

struct SufficientCondition
{
    int r = 0;
    bool holds = false;
    bool gamma_r_ok = false;
    bool gamma_o_ok = false;
    int plant_connectivity = 0;
    bool connectivity_ok = false;
    /// r < min(m, l): below the hypothesis as stated
    bool below_hypothesis = false;
    /// r > min(m, l): outside the range used by the argument
    bool above_bound = false;
    std::vector<std::string> reasons;
};

/// |Gamma_R(v)| >= r for every controllability candidate, vertex connectivity
/// of the controller-closed plant graph >= r, |Gamma_O(v)| >= r for every
/// observability candidate.
SufficientCondition sufficient_condition(const FdiContext& ctx, int r);
SufficientCondition sufficient_condition(const Mcn& mcn, int r);

/// The plant graph with every output interconnect wired back to every input interconnect.
Digraph closed_plant_graph(const StructuredGraph& plant);

/// phi(v1) and phi(v2) are disjoint. Throws ConfigError when v1 == v2.
bool necessary_phi_disjoint(const Mcn& mcn, const NodeRef& v1, const NodeRef& v2);

}  // namespace mcn
