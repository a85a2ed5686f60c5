#pragma once

#include "lstraj/lbfgs.hpp"
#include "lstraj/polyhedron.hpp"
#include "lstraj/spline.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace lstraj {

struct CorridorWeights {
    double kappa = 1.0; ///< barrier coefficient
    double rho_t = 32.0;
    double rho_v = 128.0;
    double rho_a = 128.0;
    double v_max = 4.0;
    double a_max = 5.0;
};

/// Spatial-temporal problem inside a corridor. Piece i lives in polyhedron i;
/// interior waypoint i lies in polyhedra i and i+1.
struct CorridorProblem {
    FlightCorridor corridor;
    int s = 3;
    Eigen::MatrixXd d0; ///< s x 3, row 0 is the start
    Eigen::MatrixXd dM; ///< s x 3, row 0 is the goal
    CorridorWeights weights;
    /// Per-piece multiplier on kappa, rho_v and rho_a (raised by refinement).
    Eigen::VectorXd piece_scale;
    Eigen::MatrixXd q; ///< (M-1) x 3
    Eigen::VectorXd T; ///< M

    int pieceCount() const { return corridor.size(); }

    /// Weight multiplier applied to terms attached to interior waypoint i.
    double waypointScale(int i) const { return std::max(piece_scale[i], piece_scale[i + 1]); }

    /// Point q_i with q_{-1} := start and q_{M-1} := goal.
    Eigen::Vector3d point(int i) const;
};

/// Rest-to-rest problem with waypoints at the vertex barycenter of each
/// neighbour intersection and times from distance over v_max / 2.
/// Validates the corridor (CorridorError) first.
CorridorProblem make_corridor_problem(FlightCorridor corridor, const CorridorWeights &weights,
                                      int s = 3);

struct CostGrad {
    double cost = 0.0;
    Eigen::MatrixXd dq; ///< (M-1) x 3
    Eigen::VectorXd dT; ///< M (zero for terms independent of T)
};

/// Logarithmic barrier keeping each waypoint inside its two polyhedra.
/// Returns +infinity cost when any slack is nonpositive.
CostGrad barrier_cost_grad(const CorridorProblem &problem);

/// Time regularization plus cubic penalties on finite-difference velocity
/// and acceleration proxies at the waypoints.
CostGrad dynamic_penalty_cost_grad(const CorridorProblem &problem);

/// Optimal energy term with its analytic parameter gradient.
CostGrad energy_cost_grad(const CorridorProblem &problem);

/// Sum of the energy, barrier and dynamic terms.
CostGrad total_cost_grad(const CorridorProblem &problem);

/// Minimum-energy trajectory through the problem's current waypoints and times.
Trajectory corridor_trajectory(const CorridorProblem &problem);

struct OptimizeOptions {
    std::chrono::duration<double> timeout{1.5};
    /// Clock origin for the timeout; the call's entry time when empty.
    std::optional<std::chrono::steady_clock::time_point> started;
};

struct OptimizeResult {
    Eigen::MatrixXd q;
    Eigen::VectorXd T;
    Trajectory trajectory;
    std::vector<double> cost_history; ///< initial cost followed by each accepted iterate
    LbfgsStatus status = LbfgsStatus::MaxIterations;
    bool timed_out = false;
};

/// L-BFGS over waypoints and log-durations. Throws InvalidArgument when the
/// initial waypoints are outside their intersections.
OptimizeResult optimize(const CorridorProblem &problem, const LbfgsConfig &cfg = {},
                        const OptimizeOptions &opts = {});

struct PieceVerdict {
    bool safe = true;
    bool dynamic = true;
    double max_velocity = 0.0;
    double max_acceleration = 0.0;
    double max_facet_violation = 0.0; ///< largest a.p(t) - b over the piece
    bool ok() const { return safe && dynamic; }
};

struct FeasibilityOptions {
    double dynamic_tol = 0.05;   ///< relative slack on v_max and a_max
    double safety_tol = 1e-6;    ///< absolute slack on facet offsets
    int samples_per_piece = 128; ///< dense-sampling fallback
};

/// Per-piece safety and dynamic limits using exact polynomial extrema plus sampling.
std::vector<PieceVerdict> check_feasibility(const Trajectory &traj, const FlightCorridor &corridor,
                                            double v_max, double a_max,
                                            const FeasibilityOptions &opts = {});

struct RefineOptions {
    double weight_multiplier = 10.0;
    double tilt_degrees = 5.0;
    double slack_ratio = 1e-3; ///< plane offset relative to the piece chord length
    std::uint64_t seed = 7;
};

struct RefineResult {
    CorridorProblem problem;
    int split_pieces = 0;
    std::vector<int> failed_pieces; ///< pieces whose split produced an empty intersection
};

/// Splits every violating piece's polyhedron with two tilted planes near the
/// bisector of its end points, inserts a midpoint waypoint, halves the time
/// and stiffens the local weights. `problem.q` and `problem.T` should hold the
/// solved values the verdicts refer to.
RefineResult refine(const CorridorProblem &problem, const std::vector<PieceVerdict> &verdicts,
                    const RefineOptions &opts = {});

struct PlanOptions {
    std::chrono::duration<double> timeout{1.5}; ///< shared by all rounds
    std::optional<std::chrono::steady_clock::time_point> started;
    int max_refine_rounds = 5;
    FeasibilityOptions feasibility;
    RefineOptions refinement;
};

struct PlanResult {
    CorridorProblem problem; ///< final (possibly refined) problem with optimized q, T
    Trajectory trajectory;
    std::vector<double> cost_history; ///< concatenated over rounds
    std::vector<int> round_starts;    ///< index into cost_history where each round begins
    std::vector<PieceVerdict> verdicts;
    int refine_rounds = 0;
    double final_cost = 0.0;
    bool feasible = false;
    bool timed_out = false;
};

/// optimize, then check and refine until feasible, out of rounds or out of time.
PlanResult plan(CorridorProblem problem, const LbfgsConfig &cfg = {},
                const PlanOptions &opts = {});

} // namespace lstraj
