#pragma once

// Numeric ground truth: simulation of the fault-augmented cascade and the
// generic-rank check of its fault-to-output transfer matrix.

#include <mcn/dynamics.hpp>
#include <mcn/fdi.hpp>
#include <mcn/model.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mcn {

enum class SignalShape { Impulse, Step, Sinusoid, Random };

std::optional<SignalShape> parse_signal_shape(std::string_view text);

struct FaultSignalSpec
{
    SignalShape shape = SignalShape::Step;
    double amplitude = 1.0;
    int onset = 0;             ///< first frame with a nonzero value
    double frequency = 0.25;   ///< radians per frame, sinusoid only
    std::uint64_t seed = 0;    ///< random only

    /// Throws ConfigError for a zero amplitude (non-random) or negative onset.
    void check() const;
    /// Values for frames 0..horizon-1.
    std::vector<double> samples(int horizon) const;
};

struct Trajectory
{
    int horizon = 0;
    Eigen::MatrixXd u;  ///< horizon x m
    Eigen::MatrixXd f;  ///< horizon x faults
    Eigen::MatrixXd x;  ///< horizon x states
    Eigen::MatrixXd y;  ///< horizon x outputs
};

/// x(k+1) = A x(k) + B u(k) + F f(k), y(k) = C x(k) (+ D u(k)), x(0) = 0.
/// `u` is horizon x m, or empty for a zero input.
Trajectory simulate(const StateSpace& system, const Eigen::MatrixXd& u, const std::vector<FaultSignalSpec>& faults,
                    int horizon);

/// One row per frame; see docs/trajectory-format.md.
std::string trajectory_csv(const Trajectory& t, const StateSpace& system);

/// Uniform magnitude in [0.5, 2] with a random sign on every scheduled edge.
std::vector<ComponentWeights> random_weights(const Mcn& mcn, Side side, std::mt19937_64& rng);

/// Composed cascade with one fault input per scenario node (assumption1) or
/// per (node, component) pair otherwise, in scenario order.
StateSpace fault_system(const Mcn& mcn, const FaultScenario& s, const std::vector<ComponentWeights>& weights_r,
                        const std::vector<ComponentWeights>& weights_o);
StateSpace fault_system(const Mcn& mcn, const FaultScenario& s);

struct OracleOptions
{
    int trials = 5;
    double tol = 1e-8;
    std::uint64_t seed = 1;
    int retry_cap = 20;
};

struct OracleResult
{
    int modal_rank = 0;
    std::vector<int> ranks;  ///< per trial
    std::vector<double> z;   ///< evaluation point per trial
    int resamples = 0;       ///< draws rejected as degenerate or ill-conditioned
};

/// Numerical rank (sigma_k > tol * sigma_1 after column normalization) of
/// C (zI - A)^{-1} F under random weights and a random real z beyond the
/// spectral radius; modal value over the trials (ties go to the lower rank).
/// Trials run in parallel with per-trial seeds derived from the base seed.
OracleResult fault_transfer_rank(const Mcn& mcn, const FaultScenario& s, const OracleOptions& opt);
OracleResult fault_transfer_rank_serial(const Mcn& mcn, const FaultScenario& s, const OracleOptions& opt);

/// Rank of a matrix after scaling every nonzero column to unit norm.
int normalized_rank(const Eigen::MatrixXd& M, double tol);

struct ConsistencyResult
{
    bool consistent = false;
    int r = 0;
    int structural_linking = 0;
    bool structural_solvable = false;
    OracleResult oracle;
    std::string detail;
};

/// Linking condition (max linking = r) against modal numeric rank = r.
/// Requires an assumption1 scenario.
ConsistencyResult consistency_check(const FdiContext& ctx, const FaultScenario& s, const OracleOptions& opt);

}  // namespace mcn
