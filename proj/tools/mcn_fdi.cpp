// mcn-fdi: command-line front end. Exit status 0 = ok, 1 = unsolvable
// scenarios (or oracle mismatch), 2 = configuration error, 3 = internal
// inconsistency.

#include <mcn/config.hpp>
#include <mcn/error.hpp>
#include <mcn/fdi.hpp>
#include <mcn/oracle.hpp>
#include <mcn/report.hpp>
#include <mcn/structured.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace mcn;

constexpr int kOk = 0;
constexpr int kUnsolvable = 1;
constexpr int kConfig = 2;
constexpr int kInternal = 3;

std::vector<NodeRef> parse_faults(const Mcn& mcn, const std::string& list)
{
    std::vector<NodeRef> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(resolve_node(mcn, item));
    }
    if (out.empty()) throw ConfigError("--faults lists no nodes");
    return out;
}

ReportFormat format_of(const std::string& s)
{
    return s == "structured" ? ReportFormat::Structured : ReportFormat::Text;
}

struct Options
{
    std::string config;
    std::string format = "text";
    int max_faults = 1;
    bool no_assumption1 = false;
    std::string method = "both";
    bool sufficient = false;
    std::uint64_t cap = kDefaultScenarioCap;
    std::string faults;
    int trials = 5;
    double tol = 1e-8;
    std::optional<std::uint64_t> seed;
    int horizon = 20;
    std::string signal = "step";
    double amplitude = 1.0;
    int onset = 0;
    std::string which = "mlambda";
};

int cmd_validate(const Options& o)
{
    const auto mcn = load_mcn_file(o.config);
    const auto report = validate(mcn);
    std::cout << render_validation(mcn, report, format_of(o.format));
    return report.ok() ? kOk : kConfig;
}

int cmd_analyze(const Options& o)
{
    FdiContext ctx(load_mcn_file(o.config));
    Method method = Method::Both;
    if (o.no_assumption1) {
        method = Method::NoAssumption1;
    } else if (auto m = parse_method(o.method); m && *m != Method::NoAssumption1) {
        method = *m;
    } else {
        throw ConfigError("--method must be mlambda, analysis or both");
    }
    if (o.max_faults < 1) throw ConfigError("--max-faults must be at least 1");
    std::vector<AnalysisSection> sections;
    bool all_ok = true;
    for (int r = 1; r <= o.max_faults; ++r) {
        AnalysisSection sec;
        sec.r = r;
        sec.method = method;
        sec.reports = enumerate_scenarios(ctx, r, method, o.cap);
        if (o.sufficient) sec.sufficient = sufficient_condition(ctx, r);
        all_ok = all_ok && sec.solvable_count() == static_cast<int>(sec.reports.size());
        sections.push_back(std::move(sec));
    }
    std::cout << render_analysis(sections, format_of(o.format));
    return all_ok ? kOk : kUnsolvable;
}

int cmd_check(const Options& o)
{
    FdiContext ctx(load_mcn_file(o.config));
    FaultScenario s{parse_faults(ctx.mcn(), o.faults), !o.no_assumption1};
    Method method = Method::NoAssumption1;
    if (!o.no_assumption1) {
        auto m = parse_method(o.method);
        if (!m || *m == Method::NoAssumption1) throw ConfigError("--method must be mlambda, analysis or both");
        method = *m;
    }
    const auto report = ctx.run(s, method);
    std::cout << render_check(report, format_of(o.format));
    return report.solvable ? kOk : kUnsolvable;
}

int cmd_oracle(const Options& o)
{
    FdiContext ctx(load_mcn_file(o.config));
    FaultScenario s{parse_faults(ctx.mcn(), o.faults), true};
    ctx.check_scenario(s);
    OracleOptions opt;
    opt.trials = o.trials;
    opt.tol = o.tol;
    opt.seed = o.seed ? *o.seed : std::random_device{}();
    const auto c = consistency_check(ctx, s, opt);
    std::cout << render_oracle(s, opt, c, format_of(o.format));
    return c.consistent ? kOk : kUnsolvable;
}

int cmd_simulate(const Options& o)
{
    FdiContext ctx(load_mcn_file(o.config));
    FaultScenario s{parse_faults(ctx.mcn(), o.faults), !o.no_assumption1};
    ctx.check_scenario(s);
    const auto shape = parse_signal_shape(o.signal);
    if (!shape) throw ConfigError("--signal must be impulse, step, sinusoid or random");
    const auto sys = fault_system(ctx.mcn(), s);
    FaultSignalSpec spec;
    spec.shape = *shape;
    spec.amplitude = o.amplitude;
    spec.onset = o.onset;
    std::vector<FaultSignalSpec> specs;
    for (int k = 0; k < sys.faults(); ++k) {
        spec.seed = static_cast<std::uint64_t>(k) + 1;
        specs.push_back(spec);
    }
    std::cout << trajectory_csv(simulate(sys, {}, specs, o.horizon), sys);
    return kOk;
}

int cmd_export(const Options& o)
{
    FdiContext ctx(load_mcn_file(o.config));
    if (o.which == "analysis") {
        std::cout << export_graph(ctx.analysis_graph().graph, "analysis");
        return kOk;
    }
    if (o.which != "mlambda") throw ConfigError("--which must be mlambda or analysis");
    std::vector<NodeRef> faults;
    if (!o.faults.empty()) {
        faults = parse_faults(ctx.mcn(), o.faults);
        ctx.check_scenario({faults, !o.no_assumption1});
    }
    std::cout << export_graph(ctx.mlambda_graph(faults, !o.no_assumption1), "mlambda");
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fault detection and isolation analysis for multi-hop control networks"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--format", o.format, "Report format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();

    auto config_arg = [&](CLI::App* sub) { sub->add_option("config", o.config, "Network config (JSON)")->required(); };
    auto faults_arg = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--faults", o.faults, "Comma-separated node ids (prefix r: or o: if ambiguous)");
        if (required) opt->required();
    };

    auto* validate_cmd = app.add_subcommand("validate", "Check a config");
    config_arg(validate_cmd);

    auto* analyze = app.add_subcommand("analyze", "Enumerate fault scenarios of size 1..r");
    config_arg(analyze);
    analyze->add_option("--max-faults", o.max_faults, "Largest scenario size")->required();
    analyze->add_flag("--no-assumption1", o.no_assumption1, "Per-component fault signals");
    analyze->add_option("--method", o.method, "mlambda, analysis or both")->capture_default_str();
    analyze->add_flag("--sufficient", o.sufficient, "Also evaluate the sufficient condition");
    analyze->add_option("--cap", o.cap, "Refuse above this many scenarios")->capture_default_str();

    auto* check = app.add_subcommand("check", "Analyse one scenario");
    config_arg(check);
    faults_arg(check, true);
    check->add_flag("--no-assumption1", o.no_assumption1, "Per-component fault signals");
    check->add_option("--method", o.method, "mlambda, analysis or both")->capture_default_str();

    auto* oracle = app.add_subcommand("oracle", "Numeric rank check of one scenario");
    config_arg(oracle);
    faults_arg(oracle, true);
    oracle->add_option("--trials", o.trials, "Random draws")->capture_default_str();
    oracle->add_option("--tol", o.tol, "Relative singular value threshold")->capture_default_str();
    oracle->add_option("--seed", o.seed, "Base seed (random when omitted, always reported)");

    auto* sim = app.add_subcommand("simulate", "Dump a fault response trajectory as CSV");
    config_arg(sim);
    faults_arg(sim, true);
    sim->add_option("--horizon", o.horizon, "Frames")->capture_default_str();
    sim->add_option("--signal", o.signal, "impulse, step, sinusoid or random")->capture_default_str();
    sim->add_option("--amplitude", o.amplitude, "Fault amplitude")->capture_default_str();
    sim->add_option("--onset", o.onset, "First faulty frame")->capture_default_str();
    sim->add_flag("--no-assumption1", o.no_assumption1, "Per-component fault signals");

    auto* exp = app.add_subcommand("export-graph", "Print a structured graph");
    config_arg(exp);
    exp->add_option("--which", o.which, "mlambda or analysis")->capture_default_str();
    faults_arg(exp, false);
    exp->add_flag("--no-assumption1", o.no_assumption1, "Per-component fault vertices");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(o);
        if (analyze->parsed()) return cmd_analyze(o);
        if (check->parsed()) return cmd_check(o);
        if (oracle->parsed()) return cmd_oracle(o);
        if (sim->parsed()) return cmd_simulate(o);
        if (exp->parsed()) return cmd_export(o);
    } catch (const InternalInconsistency& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return kInternal;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kConfig;
}
