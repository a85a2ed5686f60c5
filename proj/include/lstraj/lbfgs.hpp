#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string_view>

namespace lstraj {

struct LbfgsConfig {
    int memory = 8;
    double c1 = 1e-4; ///< sufficient decrease
    double c2 = 0.9;  ///< curvature (strong form)
    double grad_tol = 1e-6;
    double rel_cost_tol = 1e-4;
    int past = 3; ///< relative cost decrease is measured over this many iterations
    int max_iters = 1000;
    int max_linesearch_steps = 40;

    void validate() const;
};

enum class LbfgsStatus {
    GradientConverged,
    CostConverged,
    MaxIterations,
    LineSearchFailed,
    Stopped, ///< the progress callback asked to stop
};

std::string_view to_string(LbfgsStatus status);

/// Objective: returns the cost at x and writes the gradient. A cost of
/// +infinity marks x as outside the domain; the gradient is then ignored.
using Objective = std::function<double(const Eigen::VectorXd &x, Eigen::VectorXd &grad)>;

/// Information about one accepted iterate.
struct LbfgsIteration {
    int iteration;
    double cost;
    double step;
    double prev_cost;
    double dir_deriv0;    ///< g_k . p_k
    double dir_deriv;     ///< g_{k+1} . p_k
    const Eigen::VectorXd *x;
};

/// Return false to stop the minimization early.
using LbfgsProgress = std::function<bool(const LbfgsIteration &)>;

struct LbfgsResult {
    Eigen::VectorXd x;
    double cost = 0.0;
    LbfgsStatus status = LbfgsStatus::MaxIterations;
    int iterations = 0;
    int evaluations = 0;
};

/// Limited-memory BFGS with a bracketing/zoom strong Wolfe line search.
/// Throws InvalidArgument if the cost or gradient at x0 is not finite.
LbfgsResult minimize(const Objective &f, Eigen::VectorXd x0, const LbfgsConfig &cfg = {},
                     const LbfgsProgress &progress = {});

} // namespace lstraj
