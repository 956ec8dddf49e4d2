#include <mcn/oracle.hpp>

#include <mcn/error.hpp>
#include <mcn/structured.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <numbers>
#include <sstream>

namespace mcn {

std::optional<SignalShape> parse_signal_shape(std::string_view text)
{
    if (text == "impulse") return SignalShape::Impulse;
    if (text == "step") return SignalShape::Step;
    if (text == "sinusoid") return SignalShape::Sinusoid;
    if (text == "random") return SignalShape::Random;
    return std::nullopt;
}

void FaultSignalSpec::check() const
{
    if (onset < 0) throw ConfigError("fault onset must be non-negative");
    if (shape != SignalShape::Random && amplitude == 0.0) throw ConfigError("fault amplitude must be nonzero");
}

std::vector<double> FaultSignalSpec::samples(int horizon) const
{
    check();
    std::vector<double> v(static_cast<std::size_t>(std::max(horizon, 0)), 0.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = onset; k < horizon; ++k) {
        double value = 0.0;
        switch (shape) {
            case SignalShape::Impulse: value = k == onset ? amplitude : 0.0; break;
            case SignalShape::Step: value = amplitude; break;
            case SignalShape::Sinusoid: value = amplitude * std::sin(frequency * (k - onset)); break;
            case SignalShape::Random: value = amplitude * normal(rng); break;
        }
        v[static_cast<std::size_t>(k)] = value;
    }
    return v;
}

Trajectory simulate(const StateSpace& system, const Eigen::MatrixXd& u, const std::vector<FaultSignalSpec>& faults,
                    int horizon)
{
    if (horizon < 0) throw ConfigError("horizon must be non-negative");
    const auto n = system.states();
    const auto m = system.inputs();
    if (static_cast<int>(faults.size()) != system.faults())
        throw AnalysisError("dimension mismatch: " + std::to_string(faults.size()) + " fault signals for " +
                            std::to_string(system.faults()) + " fault inputs");
    if (u.size() != 0 && (u.rows() != horizon || u.cols() != m))
        throw AnalysisError("dimension mismatch: input sequence must be horizon x " + std::to_string(m));

    Trajectory t;
    t.horizon = horizon;
    t.u = u.size() != 0 ? u : Eigen::MatrixXd::Zero(horizon, m);
    t.f = Eigen::MatrixXd::Zero(horizon, system.faults());
    for (std::size_t s = 0; s < faults.size(); ++s) {
        const auto v = faults[s].samples(horizon);
        for (int k = 0; k < horizon; ++k) t.f(k, static_cast<Eigen::Index>(s)) = v[static_cast<std::size_t>(k)];
    }
    t.x = Eigen::MatrixXd::Zero(horizon, n);
    t.y = Eigen::MatrixXd::Zero(horizon, system.outputs());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < horizon; ++k) {
        const Eigen::VectorXd uk = t.u.row(k).transpose();
        const Eigen::VectorXd fk = t.f.row(k).transpose();
        t.x.row(k) = x.transpose();
        Eigen::VectorXd yk = system.C * x;
        if (system.has_feedthrough()) yk += system.D * uk;
        t.y.row(k) = yk.transpose();
        Eigen::VectorXd next = system.A * x + system.B * uk;
        if (system.faults() > 0) next += system.F * fk;
        x = next;
    }
    return t;
}

namespace {

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> labels_or(const std::vector<std::string>& given, const std::string& prefix, Eigen::Index count)
{
    if (static_cast<Eigen::Index>(given.size()) == count) return given;
    std::vector<std::string> out;
    for (Eigen::Index k = 1; k <= count; ++k) out.push_back(prefix + std::to_string(k));
    return out;
}

}  // namespace

std::string trajectory_csv(const Trajectory& t, const StateSpace& system)
{
    std::ostringstream os;
    const auto u = labels_or(system.input_labels, "u", t.u.cols());
    const auto f = labels_or(system.fault_labels, "f", t.f.cols());
    const auto y = labels_or(system.output_labels, "y", t.y.cols());
    const auto x = labels_or(system.state_labels, "x", t.x.cols());
    os << "k";
    for (const auto& l : u) os << ",u:" << l;
    for (const auto& l : f) os << ",f:" << l;
    for (const auto& l : y) os << ",y:" << l;
    for (const auto& l : x) os << ",x:" << l;
    os << "\n";
    for (int k = 0; k < t.horizon; ++k) {
        os << k;
        for (const auto* M : {&t.u, &t.f, &t.y, &t.x})
            for (Eigen::Index c = 0; c < M->cols(); ++c) os << "," << fmt((*M)(k, c));
        os << "\n";
    }
    return os.str();
}

std::vector<ComponentWeights> random_weights(const Mcn& mcn, Side side, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> magnitude(0.5, 2.0);
    std::bernoulli_distribution negative(0.5);
    std::vector<ComponentWeights> out;
    for (const auto& sched : mcn.schedules(side)) {
        ComponentWeights w;
        for (const auto& e : sched.edges()) {
            const double a = magnitude(rng);
            w.weights[e] = negative(rng) ? -a : a;
        }
        out.push_back(std::move(w));
    }
    return out;
}

StateSpace fault_system(const Mcn& mcn, const FaultScenario& s, const std::vector<ComponentWeights>& weights_r,
                        const std::vector<ComponentWeights>& weights_o)
{
    std::vector<NodeId> r_ids, o_ids;
    for (const auto& v : s.nodes) (v.side == Side::Controllability ? r_ids : o_ids).push_back(v.id);
    const auto r = network_transfers(mcn, Side::Controllability, weights_r, r_ids);
    const auto o = network_transfers(mcn, Side::Observability, weights_o, o_ids);

    // F column of (node, component) inside its block
    std::map<std::pair<NodeRef, int>, int> column;
    auto realize = [&](const NetworkTransfers& t, Side side) {
        std::vector<StateSpace> blocks;
        for (int i = 0; i < static_cast<int>(t.blocks.size()); ++i) {
            std::vector<FirTransfer> attached;
            for (const auto& v : s.nodes) {
                if (v.side != side) continue;
                const auto& per = t.faults.at(v.id);
                auto it = per.find(i);
                if (it == per.end()) continue;
                column[{v, i}] = static_cast<int>(attached.size());
                attached.push_back(it->second);
            }
            blocks.push_back(fir_realization(t.blocks[static_cast<std::size_t>(i)], attached));
        }
        return blocks;
    };
    const auto r_blocks = realize(r, Side::Controllability);
    const auto o_blocks = realize(o, Side::Observability);

    FaultWiring wiring;
    for (const auto& v : s.nodes) {
        const auto& t = v.side == Side::Controllability ? r : o;
        const auto& per = t.faults.at(v.id);
        if (s.assumption1) {
            FaultWiring::Signal sig{fault_label(v), {}};
            for (const auto& [i, f] : per) sig.entries.push_back({v.side, i, column.at({v, i})});
            wiring.signals.push_back(std::move(sig));
        } else {
            for (const auto& [i, f] : per)
                wiring.signals.push_back({fault_label(v, i), {{v.side, i, column.at({v, i})}}});
        }
    }
    return compose_mcn(r_blocks, plant_model(mcn), o_blocks, wiring);
}

StateSpace fault_system(const Mcn& mcn, const FaultScenario& s)
{
    return fault_system(mcn, s, mcn.weights_r, mcn.weights_o);
}

int normalized_rank(const Eigen::MatrixXd& M, double tol)
{
    if (M.size() == 0) return 0;
    Eigen::MatrixXd N = M;
    for (Eigen::Index c = 0; c < N.cols(); ++c) {
        const double norm = N.col(c).norm();
        if (norm > 0.0) N.col(c) /= norm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(N);
    const auto& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
        if (sigma(k) > tol * sigma(0)) ++rank;
    return rank;
}

namespace {

struct Trial
{
    int rank = 0;
    double z = 0.0;
    int resamples = 0;
};

double spectral_radius(const Eigen::MatrixXd& A)
{
    if (A.rows() == 0) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Trial run_trial(const Mcn& mcn, const FaultScenario& s, const OracleOptions& opt, int trial)
{
    Trial out;
    for (int attempt = 0; attempt <= opt.retry_cap; ++attempt) {
        std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                          static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(attempt)};
        std::mt19937_64 rng(seq);
        const auto wr = random_weights(mcn, Side::Controllability, rng);
        const auto wo = random_weights(mcn, Side::Observability, rng);
        const double u = std::uniform_real_distribution<double>(1.5, 3.0)(rng);
        StateSpace sys;
        try {
            sys = fault_system(mcn, s, wr, wo);
        } catch (const AnalysisError&) {
            ++out.resamples;  // degenerate cancellation under this draw
            continue;
        }
        const double z = u * std::max(1.0, spectral_radius(sys.A));
        const Eigen::MatrixXd M = z * Eigen::MatrixXd::Identity(sys.states(), sys.states()) - sys.A;
        const auto lu = M.partialPivLu();
        if (!(lu.rcond() > 1e-12)) {
            ++out.resamples;
            continue;
        }
        const Eigen::MatrixXd T = sys.C * lu.solve(sys.F);
        if (!T.allFinite()) {
            ++out.resamples;
            continue;
        }
        out.rank = normalized_rank(T, opt.tol);
        out.z = z;
        return out;
    }
    throw AnalysisError("oracle: " + std::to_string(opt.retry_cap + 1) + " consecutive ill-conditioned draws for " +
                        scenario_label(s));
}

OracleResult collect(const std::vector<Trial>& trials)
{
    OracleResult res;
    std::map<int, int> votes;
    for (const auto& t : trials) {
        res.ranks.push_back(t.rank);
        res.z.push_back(t.z);
        res.resamples += t.resamples;
        ++votes[t.rank];
    }
    int best = -1;
    for (const auto& [rank, count] : votes)
        if (count > best) {
            best = count;
            res.modal_rank = rank;
        }
    return res;
}

void check_options(const FaultScenario& s, const OracleOptions& opt)
{
    if (s.nodes.empty()) throw ConfigError("fault scenario is empty");
    if (opt.trials < 1) throw ConfigError("oracle needs at least one trial");
    if (!(opt.tol > 0.0)) throw ConfigError("oracle tolerance must be positive");
}

}  // namespace

OracleResult fault_transfer_rank_serial(const Mcn& mcn, const FaultScenario& s, const OracleOptions& opt)
{
    check_options(s, opt);
    std::vector<Trial> trials;
    for (int k = 0; k < opt.trials; ++k) trials.push_back(run_trial(mcn, s, opt, k));
    return collect(trials);
}

OracleResult fault_transfer_rank(const Mcn& mcn, const FaultScenario& s, const OracleOptions& opt)
{
    check_options(s, opt);
    std::vector<Trial> trials(static_cast<std::size_t>(opt.trials));
    std::vector<std::exception_ptr> errors(trials.size());
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < opt.trials; ++k) {
        try {
            trials[static_cast<std::size_t>(k)] = run_trial(mcn, s, opt, k);
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return collect(trials);
}

ConsistencyResult consistency_check(const FdiContext& ctx, const FaultScenario& s, const OracleOptions& opt)
{
    if (!s.assumption1) throw ConfigError("the rank oracle compares assumption1 scenarios only");
    const auto rep = ctx.mlambda(s);
    ConsistencyResult c;
    c.r = rep.r;
    c.structural_linking = rep.k;
    c.structural_solvable = rep.k == rep.r;
    c.oracle = fault_transfer_rank(ctx.mcn(), s, opt);
    const bool numeric_full = c.oracle.modal_rank == c.r;
    c.consistent = numeric_full == c.structural_solvable;
    if (!c.consistent)
        c.detail = "structural linking " + std::to_string(c.structural_linking) + " vs numeric rank " +
                   std::to_string(c.oracle.modal_rank) + " for r = " + std::to_string(c.r);
    return c;
}

}  // namespace mcn
