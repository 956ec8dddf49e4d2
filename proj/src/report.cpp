#include <mcn/report.hpp>

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace mcn {

using ojson = nlohmann::ordered_json;

int AnalysisSection::solvable_count() const
{
    int n = 0;
    for (const auto& r : reports) n += r.solvable ? 1 : 0;
    return n;
}

namespace {

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string verdict(bool solvable) { return solvable ? "solvable" : "unsolvable"; }

std::string join(const std::vector<std::string>& items, const char* sep)
{
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (k > 0) out += sep;
        out += items[k];
    }
    return out;
}

ojson optional_bool(const std::optional<bool>& b) { return b ? ojson(*b) : ojson(nullptr); }

ojson scenario_json(const FaultScenario& s)
{
    ojson nodes = ojson::array();
    for (const auto& v : s.nodes) nodes.push_back({{"side", std::string(1, side_tag(v.side))}, {"id", v.id}});
    return nodes;
}

ojson report_json(const FdiReport& r)
{
    ojson j;
    j["scenario"] = scenario_json(r.scenario);
    j["assumption1"] = r.scenario.assumption1;
    j["r"] = r.r;
    j["method"] = std::string(to_string(r.method));
    j["verdict"] = verdict(r.solvable);
    j["linking"] = r.k;
    j["observable"] = optional_bool(r.observable);
    j["mlambda_linking"] = optional_bool(r.mlambda_linking);
    j["analysis_linking"] = optional_bool(r.analysis_linking);
    j["agreement"] = optional_bool(r.agreement);
    j["chosen_copies"] = r.chosen_copies;
    j["witness"] = r.witness;
    ojson checks = ojson::array();
    for (const auto& c : r.checks)
        checks.push_back({{"node", c.node.id},
                          {"component", c.component + 1},
                          {"linking", c.linking},
                          {"without", c.without},
                          {"passed", c.passed}});
    j["checks"] = checks;
    j["diagnostic"] = r.diagnostic;
    return j;
}

ojson sufficient_json(const SufficientCondition& s)
{
    return {{"r", s.r},
            {"holds", s.holds},
            {"gamma_r", s.gamma_r_ok},
            {"gamma_o", s.gamma_o_ok},
            {"plant_connectivity", s.plant_connectivity},
            {"below_hypothesis", s.below_hypothesis},
            {"above_bound", s.above_bound},
            {"reasons", s.reasons}};
}

void scenario_text(std::ostream& os, const FdiReport& r)
{
    os << "scenario " << scenario_label(r.scenario) << ": " << verdict(r.solvable) << "\n";
    os << "  method " << to_string(r.method) << ", r = " << r.r << ", linking = " << r.k << "\n";
    if (r.observable) os << "  structurally observable: " << yes_no(*r.observable) << "\n";
    if (r.agreement) os << "  cross-check agreement: " << yes_no(*r.agreement) << "\n";
    if (!r.chosen_copies.empty()) os << "  copies: " << join(r.chosen_copies, " ") << "\n";
    for (const auto& p : r.witness) os << "  path: " << join(p, " -> ") << "\n";
    for (const auto& c : r.checks)
        os << "  check f(" << c.node.id << "," << c.component + 1 << "): linking " << c.linking << ", without "
           << c.without << (c.passed ? " ok" : " FAIL") << "\n";
    if (!r.diagnostic.empty()) os << "  reason: " << r.diagnostic << "\n";
}

void sufficient_text(std::ostream& os, const SufficientCondition& s)
{
    os << "sufficient condition r = " << s.r << ": " << (s.holds ? "holds" : "fails") << "\n";
    os << "  plant connectivity (controller-closed): " << s.plant_connectivity << "\n";
    if (s.below_hypothesis) os << "  note: r < min(m, l), outside the hypothesis\n";
    if (s.above_bound) os << "  note: r > min(m, l), outside the proven range\n";
    for (const auto& why : s.reasons) os << "  reason: " << why << "\n";
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string render_validation(const Mcn& mcn, const ValidationReport& v, ReportFormat format)
{
    if (format == ReportFormat::Structured) {
        ojson j;
        j["valid"] = v.ok();
        j["violations"] = v.violations;
        j["n"] = mcn.plant.n();
        j["m"] = mcn.plant.m();
        j["l"] = mcn.plant.l();
        j["nodes_r"] = mcn.g_r.nodes.size();
        j["nodes_o"] = mcn.g_o.nodes.size();
        return dump(j);
    }
    std::ostringstream os;
    os << "plant n = " << mcn.plant.n() << ", m = " << mcn.plant.m() << ", l = " << mcn.plant.l() << "\n";
    os << "nodes: " << mcn.g_r.nodes.size() << " controllability, " << mcn.g_o.nodes.size() << " observability\n";
    for (const auto& s : v.violations) os << "violation: " << s << "\n";
    os << (v.ok() ? "valid" : "invalid") << "\n";
    return os.str();
}

std::string render_analysis(const std::vector<AnalysisSection>& sections, ReportFormat format)
{
    if (format == ReportFormat::Structured) {
        ojson j = ojson::array();
        for (const auto& sec : sections) {
            ojson s;
            s["r"] = sec.r;
            s["method"] = std::string(to_string(sec.method));
            s["scenarios"] = sec.reports.size();
            s["solvable"] = sec.solvable_count();
            s["unsolvable"] = static_cast<int>(sec.reports.size()) - sec.solvable_count();
            ojson reports = ojson::array();
            for (const auto& r : sec.reports) reports.push_back(report_json(r));
            s["reports"] = reports;
            s["sufficient"] = sec.sufficient ? sufficient_json(*sec.sufficient) : ojson(nullptr);
            j.push_back(s);
        }
        return dump({{"analysis", j}});
    }
    std::ostringstream os;
    for (const auto& sec : sections) {
        const int ok = sec.solvable_count();
        os << "== r = " << sec.r << " (" << to_string(sec.method) << "): " << sec.reports.size() << " scenarios, " << ok
           << " solvable, " << sec.reports.size() - static_cast<std::size_t>(ok) << " unsolvable\n";
        for (const auto& r : sec.reports) scenario_text(os, r);
        if (sec.sufficient) sufficient_text(os, *sec.sufficient);
    }
    return os.str();
}

std::string render_check(const FdiReport& report, ReportFormat format)
{
    if (format == ReportFormat::Structured) return dump(report_json(report));
    std::ostringstream os;
    scenario_text(os, report);
    return os.str();
}

std::string render_oracle(const FaultScenario& s, const OracleOptions& opt, const ConsistencyResult& c,
                          ReportFormat format)
{
    if (format == ReportFormat::Structured) {
        ojson j;
        j["scenario"] = scenario_json(s);
        j["seed"] = opt.seed;
        j["trials"] = opt.trials;
        j["tol"] = opt.tol;
        j["r"] = c.r;
        j["structural_linking"] = c.structural_linking;
        j["ranks"] = c.oracle.ranks;
        j["z"] = c.oracle.z;
        j["modal_rank"] = c.oracle.modal_rank;
        j["resamples"] = c.oracle.resamples;
        j["consistent"] = c.consistent;
        j["detail"] = c.detail;
        return dump(j);
    }
    std::ostringstream os;
    char tol[32];
    std::snprintf(tol, sizeof tol, "%g", opt.tol);
    os << "oracle " << scenario_label(s) << ": seed " << opt.seed << ", trials " << opt.trials << ", tol " << tol << "\n";
    os << "  ranks:";
    for (int r : c.oracle.ranks) os << " " << r;
    os << "\n  modal rank " << c.oracle.modal_rank << ", structural linking " << c.structural_linking << ", r = " << c.r
       << "\n";
    if (c.oracle.resamples > 0) os << "  resampled draws: " << c.oracle.resamples << "\n";
    os << "  " << (c.consistent ? "consistent" : "INCONSISTENT: " + c.detail) << "\n";
    return os.str();
}

}  // namespace mcn
