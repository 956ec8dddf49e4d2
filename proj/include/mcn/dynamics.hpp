#pragma once

// Quantitative semantics of the relay networks: delay-indexed FIR transfers,
// their shift-register realizations, ZOH plant discretization and the
// O(z) P(z) R(z) cascade.

#include <mcn/model.hpp>

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace mcn {

/// sum_{d=1}^{D} gamma(d) z^{-d}, stored as gamma[d-1]. gamma(D) != 0.
struct FirTransfer
{
    std::vector<double> gamma;

    int max_delay() const { return static_cast<int>(gamma.size()); }
    double at(int d) const { return d >= 1 && d <= max_delay() ? gamma[static_cast<std::size_t>(d - 1)] : 0.0; }
    double evaluate(double z) const;
};

struct StateSpace
{
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
    Eigen::MatrixXd D;  ///< feedthrough; empty means zero
    Eigen::MatrixXd F;  ///< fault input matrix; zero columns when no faults are attached
    std::vector<std::string> state_labels;
    std::vector<std::string> input_labels;
    std::vector<std::string> output_labels;
    std::vector<std::string> fault_labels;

    int states() const { return static_cast<int>(A.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
    int outputs() const { return static_cast<int>(C.rows()); }
    int faults() const { return static_cast<int>(F.cols()); }
    bool has_feedthrough() const { return D.size() != 0; }

    /// C (zI - A)^{-1} B + D at a real point z.
    Eigen::MatrixXd transfer(double z) const;
    /// C (zI - A)^{-1} F.
    Eigen::MatrixXd fault_transfer(double z) const;
};

/// Frames needed to traverse `path`: one, plus one per hop whose slot is not
/// strictly later than the previous hop's slot. Throws AnalysisError for an
/// unscheduled edge or an empty path.
int path_delay(std::span<const Edge> path, const ComponentSchedule& sched);

/// All simple paths source -> sink in the routing DAG, in deterministic DFS order.
std::vector<std::vector<Edge>> routing_paths(const RoutingGraph& sub, const NodeId& source, const NodeId& sink);

/// gamma(d) = sum of weight products over source->sink paths of delay d.
/// Throws AnalysisError "no path" or "degenerate cancellation".
FirTransfer block_transfer(const RoutingGraph& sub, const ComponentWeights& w, const ComponentSchedule& sched,
                           const NodeId& source, const NodeId& sink);

/// Transfer from a signal injected at relay v to the sink of the component.
FirTransfer fault_transfer(const RoutingGraph& sub, const ComponentWeights& w, const ComponentSchedule& sched,
                           const NodeId& v, const NodeId& sink);

/// Shift-register realization: A has an identity superdiagonal, B = gamma,
/// one F column per attached fault (zero padded), C = e_1^T.
StateSpace fir_realization(const FirTransfer& f, std::span<const FirTransfer> attached_faults = {});

/// exp(M), scaling and squaring over a truncated Taylor series.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& M);

/// Zero-order-hold discretization with sampling time T.
StateSpace discretize_plant(const Plant& p, double T);

/// Discrete-time plant model used by the analysis: ZOH with the frame
/// duration for continuous plants, the matrices as given otherwise.
StateSpace plant_model(const Mcn& mcn);

/// Routes one composite fault input into block F columns.
struct FaultWiring
{
    struct Entry
    {
        Side side = Side::Controllability;
        int component = 0;
        int column = 0;  ///< column of that block's F
    };
    struct Signal
    {
        std::string label;
        std::vector<Entry> entries;
    };
    std::vector<Signal> signals;
};

/// Cascade O(z) P(z) R(z) with block-diagonal R and O. Inputs are u (m);
/// fault inputs are the wiring signals in order; outputs are y (l).
StateSpace compose_mcn(std::span<const StateSpace> r_blocks, const StateSpace& plant_d,
                       std::span<const StateSpace> o_blocks, const FaultWiring& wiring = {});

}  // namespace mcn
