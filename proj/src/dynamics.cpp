#include <mcn/dynamics.hpp>

#include <mcn/error.hpp>
#include <mcn/exact_sum.hpp>

#include <Eigen/LU>

#include <cmath>
#include <functional>
#include <map>

namespace mcn {

double FirTransfer::evaluate(double z) const
{
    double acc = 0.0;
    double zinv_d = 1.0;
    for (double g : gamma) {
        zinv_d /= z;
        acc += g * zinv_d;
    }
    return acc;
}

namespace {

Eigen::MatrixXd resolvent_times(const Eigen::MatrixXd& A, double z, const Eigen::MatrixXd& rhs)
{
    if (A.rows() == 0) return Eigen::MatrixXd::Zero(0, rhs.cols());
    Eigen::MatrixXd M = z * Eigen::MatrixXd::Identity(A.rows(), A.cols()) - A;
    return M.partialPivLu().solve(rhs);
}

std::vector<std::string> numbered(const std::string& prefix, int count)
{
    std::vector<std::string> out;
    for (int k = 1; k <= count; ++k) out.push_back(prefix + std::to_string(k));
    return out;
}

}  // namespace

Eigen::MatrixXd StateSpace::transfer(double z) const
{
    Eigen::MatrixXd G = C * resolvent_times(A, z, B);
    if (has_feedthrough()) G += D;
    return G;
}

Eigen::MatrixXd StateSpace::fault_transfer(double z) const { return C * resolvent_times(A, z, F); }

int path_delay(std::span<const Edge> path, const ComponentSchedule& sched)
{
    if (path.empty()) throw AnalysisError("empty path has no delay");
    int frames = 1;
    std::optional<int> previous;
    for (const auto& e : path) {
        const auto slot = sched.slot_of(e);
        if (!slot) throw AnalysisError("unscheduled link " + to_string(e) + " on path");
        if (previous && *slot <= *previous) ++frames;
        previous = slot;
    }
    return frames;
}

std::vector<std::vector<Edge>> routing_paths(const RoutingGraph& sub, const NodeId& source, const NodeId& sink)
{
    std::vector<std::vector<Edge>> paths;
    if (source == sink || !sub.has_node(source) || !sub.has_node(sink)) return paths;
    std::vector<Edge> current;
    std::vector<NodeId> on_path{source};
    std::function<void(const NodeId&)> dfs = [&](const NodeId& v) {
        for (const auto& w : sub.successors(v)) {
            if (std::find(on_path.begin(), on_path.end(), w) != on_path.end()) continue;
            current.push_back({v, w});
            if (w == sink) {
                paths.push_back(current);
            } else {
                on_path.push_back(w);
                dfs(w);
                on_path.pop_back();
            }
            current.pop_back();
        }
    };
    dfs(source);
    return paths;
}

FirTransfer block_transfer(const RoutingGraph& sub, const ComponentWeights& w, const ComponentSchedule& sched,
                           const NodeId& source, const NodeId& sink)
{
    const auto paths = routing_paths(sub, source, sink);
    if (paths.empty()) throw AnalysisError("no path from " + source + " to " + sink);
    std::map<int, std::vector<double>> terms;
    for (const auto& path : paths) {
        double product = 1.0;
        for (const auto& e : path) product *= w.at(e);
        terms[path_delay(path, sched)].push_back(product);
    }
    FirTransfer f;
    f.gamma.assign(static_cast<std::size_t>(terms.rbegin()->first), 0.0);
    for (const auto& [d, values] : terms) f.gamma[static_cast<std::size_t>(d - 1)] = exact_sum(values);
    while (!f.gamma.empty() && f.gamma.back() == 0.0) f.gamma.pop_back();
    if (f.gamma.empty())
        throw AnalysisError("degenerate cancellation: every coefficient from " + source + " to " + sink + " is zero");
    return f;
}

FirTransfer fault_transfer(const RoutingGraph& sub, const ComponentWeights& w, const ComponentSchedule& sched,
                           const NodeId& v, const NodeId& sink)
{
    if (!sub.has_node(v)) throw AnalysisError("no path from " + v + " to " + sink + " (node not routed)");
    return block_transfer(sub, w, sched, v, sink);
}

StateSpace fir_realization(const FirTransfer& f, std::span<const FirTransfer> attached_faults)
{
    const int D = f.max_delay();
    if (D == 0) throw AnalysisError("empty FIR transfer");
    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(D, D);
    for (int k = 0; k + 1 < D; ++k) ss.A(k, k + 1) = 1.0;
    ss.B = Eigen::Map<const Eigen::VectorXd>(f.gamma.data(), D);
    ss.C = Eigen::MatrixXd::Zero(1, D);
    ss.C(0, 0) = 1.0;
    ss.F = Eigen::MatrixXd::Zero(D, static_cast<Eigen::Index>(attached_faults.size()));
    for (std::size_t c = 0; c < attached_faults.size(); ++c) {
        const auto& g = attached_faults[c];
        if (g.max_delay() == 0) throw AnalysisError("empty fault FIR transfer");
        if (g.max_delay() > D)
            throw AnalysisError("fault transfer delay " + std::to_string(g.max_delay()) + " exceeds block delay " +
                                std::to_string(D));
        for (int d = 1; d <= g.max_delay(); ++d) ss.F(d - 1, static_cast<Eigen::Index>(c)) = g.at(d);
    }
    ss.state_labels = numbered("x", D);
    ss.input_labels = {"u"};
    ss.output_labels = {"y"};
    ss.fault_labels = numbered("f", static_cast<int>(attached_faults.size()));
    return ss;
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& M)
{
    const auto n = M.rows();
    if (n == 0) return M;
    const double norm = M.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Eigen::MatrixXd X = M / std::ldexp(1.0, squarings);
    Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 60; ++k) {
        term = term * X / static_cast<double>(k);
        E += term;
        if (term.cwiseAbs().colwise().sum().maxCoeff() <= 1e-18 * E.cwiseAbs().colwise().sum().maxCoeff()) break;
    }
    for (int s = 0; s < squarings; ++s) E = E * E;
    return E;
}

StateSpace discretize_plant(const Plant& p, double T)
{
    if (p.kind != PlantKind::Continuous) throw AnalysisError("discretize_plant expects a continuous-time plant");
    if (!(T > 0.0)) throw AnalysisError("sampling time must be positive");
    const auto n = p.A.rows();
    const auto m = p.B.cols();
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = p.A * T;
    aug.topRightCorner(n, m) = p.B * T;
    const Eigen::MatrixXd E = matrix_exponential(aug);
    StateSpace ss;
    ss.A = E.topLeftCorner(n, n);
    ss.B = E.topRightCorner(n, m);
    ss.C = p.C;
    ss.F = Eigen::MatrixXd::Zero(n, 0);
    ss.state_labels = numbered("x", static_cast<int>(n));
    ss.input_labels = numbered("ut", static_cast<int>(m));
    ss.output_labels = numbered("yt", p.l());
    return ss;
}

StateSpace plant_model(const Mcn& mcn)
{
    if (mcn.plant.kind == PlantKind::Continuous) return discretize_plant(mcn.plant, mcn.frame_duration());
    StateSpace ss;
    ss.A = mcn.plant.A;
    ss.B = mcn.plant.B;
    ss.C = mcn.plant.C;
    ss.F = Eigen::MatrixXd::Zero(mcn.plant.n(), 0);
    ss.state_labels = numbered("x", mcn.plant.n());
    ss.input_labels = numbered("ut", mcn.plant.m());
    ss.output_labels = numbered("yt", mcn.plant.l());
    return ss;
}

StateSpace compose_mcn(std::span<const StateSpace> r_blocks, const StateSpace& plant_d,
                       std::span<const StateSpace> o_blocks, const FaultWiring& wiring)
{
    const auto m = static_cast<int>(r_blocks.size());
    const auto l = static_cast<int>(o_blocks.size());
    if (m != plant_d.inputs())
        throw AnalysisError("dimension mismatch: " + std::to_string(m) + " actuation blocks for " +
                            std::to_string(plant_d.inputs()) + " plant inputs");
    if (l != plant_d.outputs())
        throw AnalysisError("dimension mismatch: " + std::to_string(l) + " sensing blocks for " +
                            std::to_string(plant_d.outputs()) + " plant outputs");
    auto check_block = [](const StateSpace& b, const char* what) {
        if (b.inputs() != 1 || b.outputs() != 1) throw AnalysisError(std::string("dimension mismatch: ") + what + " block is not SISO");
        if (b.has_feedthrough() && !b.D.isZero()) throw AnalysisError(std::string(what) + " block must be strictly proper");
    };
    for (const auto& b : r_blocks) check_block(b, "actuation");
    for (const auto& b : o_blocks) check_block(b, "sensing");

    std::vector<Eigen::Index> r_off, o_off;
    Eigen::Index N = 0;
    for (const auto& b : r_blocks) {
        r_off.push_back(N);
        N += b.states();
    }
    const Eigen::Index p_off = N;
    const Eigen::Index np = plant_d.states();
    N += np;
    for (const auto& b : o_blocks) {
        o_off.push_back(N);
        N += b.states();
    }

    Eigen::MatrixXd Dp = plant_d.has_feedthrough() ? plant_d.D : Eigen::MatrixXd::Zero(l, m);
    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(N, N);
    ss.B = Eigen::MatrixXd::Zero(N, m);
    ss.C = Eigen::MatrixXd::Zero(l, N);
    ss.F = Eigen::MatrixXd::Zero(N, static_cast<Eigen::Index>(wiring.signals.size()));

    for (int i = 0; i < m; ++i) {
        const auto& R = r_blocks[static_cast<std::size_t>(i)];
        const auto off = r_off[static_cast<std::size_t>(i)];
        ss.A.block(off, off, R.states(), R.states()) = R.A;
        ss.B.block(off, i, R.states(), 1) = R.B;
        // x_p(k+1) gets B_p[:, i] * u~_i with u~_i = C_Ri x_Ri
        ss.A.block(p_off, off, np, R.states()) = plant_d.B.col(i) * R.C;
    }
    ss.A.block(p_off, p_off, np, np) = plant_d.A;
    for (int j = 0; j < l; ++j) {
        const auto& O = o_blocks[static_cast<std::size_t>(j)];
        const auto off = o_off[static_cast<std::size_t>(j)];
        ss.A.block(off, off, O.states(), O.states()) = O.A;
        ss.A.block(off, p_off, O.states(), np) = O.B * plant_d.C.row(j);
        for (int i = 0; i < m; ++i) {
            if (Dp(j, i) == 0.0) continue;
            const auto& R = r_blocks[static_cast<std::size_t>(i)];
            ss.A.block(off, r_off[static_cast<std::size_t>(i)], O.states(), R.states()) += O.B * Dp(j, i) * R.C;
        }
        ss.C.block(j, off, 1, O.states()) = O.C;
    }

    for (std::size_t s = 0; s < wiring.signals.size(); ++s) {
        const auto& sig = wiring.signals[s];
        for (const auto& e : sig.entries) {
            const bool r_side = e.side == Side::Controllability;
            const auto& blocks = r_side ? r_blocks : o_blocks;
            if (e.component < 0 || e.component >= static_cast<int>(blocks.size()))
                throw AnalysisError("fault wiring references missing component");
            const auto& blk = blocks[static_cast<std::size_t>(e.component)];
            if (e.column < 0 || e.column >= blk.faults()) throw AnalysisError("fault wiring references missing F column");
            const auto off = (r_side ? r_off : o_off)[static_cast<std::size_t>(e.component)];
            ss.F.block(off, static_cast<Eigen::Index>(s), blk.states(), 1) += blk.F.col(e.column);
        }
        ss.fault_labels.push_back(sig.label);
    }

    for (int i = 0; i < m; ++i)
        for (int d = 1; d <= r_blocks[static_cast<std::size_t>(i)].states(); ++d)
            ss.state_labels.push_back("xR" + std::to_string(i + 1) + "_" + std::to_string(d));
    for (const auto& lbl : plant_d.state_labels) ss.state_labels.push_back(lbl);
    if (static_cast<Eigen::Index>(plant_d.state_labels.size()) != np)
        for (Eigen::Index k = static_cast<Eigen::Index>(plant_d.state_labels.size()); k < np; ++k)
            ss.state_labels.push_back("x" + std::to_string(k + 1));
    for (int j = 0; j < l; ++j)
        for (int d = 1; d <= o_blocks[static_cast<std::size_t>(j)].states(); ++d)
            ss.state_labels.push_back("xO" + std::to_string(j + 1) + "_" + std::to_string(d));
    for (int i = 1; i <= m; ++i) ss.input_labels.push_back("u" + std::to_string(i));
    for (int j = 1; j <= l; ++j) ss.output_labels.push_back("y" + std::to_string(j));
    return ss;
}

}  // namespace mcn
