#include "lstraj/corridor_opt.hpp"

#include "lstraj/errors.hpp"
#include "lstraj/gradients.hpp"
#include "lstraj/min_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lstraj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MinEnergyProblem energy_problem(const CorridorProblem &p)
{
    MinEnergyProblem e;
    e.s = p.s;
    e.spec.d0 = p.d0;
    e.spec.dM = p.dM;
    e.spec.waypoints = p.q;
    e.times = PieceTimes(p.T);
    return e;
}

} // namespace

Eigen::Vector3d CorridorProblem::point(int i) const
{
    if (i < 0)
        return d0.row(0).transpose();
    if (i >= q.rows())
        return dM.row(0).transpose();
    return q.row(i).transpose();
}

CorridorProblem make_corridor_problem(FlightCorridor corridor, const CorridorWeights &weights,
                                      int s)
{
    corridor.validate();
    if (!(weights.v_max > 0.0))
        throw InvalidArgument("v_max must be positive");
    const int m = corridor.size();
    CorridorProblem p;
    p.s = s;
    p.weights = weights;
    p.d0 = Eigen::MatrixXd::Zero(s, 3);
    p.dM = Eigen::MatrixXd::Zero(s, 3);
    p.d0.row(0) = corridor.start.transpose();
    p.dM.row(0) = corridor.goal.transpose();
    p.piece_scale = Eigen::VectorXd::Ones(m);
    p.q.resize(m - 1, 3);
    for (int i = 0; i + 1 < m; ++i) {
        const auto c = interior_point(corridor.polyhedra[i].intersect(corridor.polyhedra[i + 1]));
        // validate() already guaranteed a strictly interior point exists.
        p.q.row(i) = c->transpose();
    }
    p.corridor = std::move(corridor);
    p.T.resize(m);
    for (int i = 0; i < m; ++i) {
        const double dist = (p.point(i) - p.point(i - 1)).norm();
        p.T[i] = std::max(dist / (0.5 * weights.v_max), 1e-3);
    }
    return p;
}

CostGrad barrier_cost_grad(const CorridorProblem &p)
{
    const int m = p.pieceCount();
    CostGrad out{0.0, Eigen::MatrixXd::Zero(m - 1, 3), Eigen::VectorXd::Zero(m)};
    if (p.weights.kappa == 0.0)
        return out;
    for (int i = 0; i + 1 < m; ++i) {
        const Eigen::Vector3d x = p.q.row(i).transpose();
        const double kappa = p.weights.kappa * p.waypointScale(i);
        for (int j = i; j <= i + 1; ++j) {
            const Polyhedron &poly = p.corridor.polyhedra[j];
            const Eigen::VectorXd slack = poly.slack(x);
            if ((slack.array() <= 0.0).any()) {
                out.cost = kInf;
                return out;
            }
            out.cost -= kappa * slack.array().log().sum();
            // d/dx of -ln(b - a.x) is a / (b - a.x)
            out.dq.row(i) += kappa * (slack.cwiseInverse().transpose() * poly.A);
        }
    }
    return out;
}

CostGrad dynamic_penalty_cost_grad(const CorridorProblem &p)
{
    const int m = p.pieceCount();
    const CorridorWeights &w = p.weights;
    CostGrad out{0.0, Eigen::MatrixXd::Zero(m - 1, 3), Eigen::VectorXd::Zero(m)};
    out.cost = w.rho_t * p.T.sum();
    out.dT.setConstant(w.rho_t);

    auto addPoint = [&](int idx, const Eigen::Vector3d &g) {
        if (idx >= 0 && idx < m - 1)
            out.dq.row(idx) += g.transpose();
    };

    for (int i = 0; i + 1 < m; ++i) {
        const double scale = p.waypointScale(i);
        const Eigen::Vector3d prev = p.point(i - 1);
        const Eigen::Vector3d cur = p.point(i);
        const Eigen::Vector3d next = p.point(i + 1);
        const double tm = p.T[i];
        const double tp = p.T[i + 1];
        const double sum = tm + tp;

        // Velocity proxy u = (next - prev) / (tm + tp)
        const double rhoV = w.rho_v * scale;
        if (rhoV != 0.0) {
            const Eigen::Vector3d u = (next - prev) / sum;
            const double viol = u.squaredNorm() - w.v_max * w.v_max;
            if (viol > 0.0) {
                out.cost += rhoV * viol * viol * viol;
                const double dg = rhoV * 3.0 * viol * viol;
                const Eigen::Vector3d du = dg * 2.0 * u; // d/du
                addPoint(i + 1, du / sum);
                addPoint(i - 1, -du / sum);
                const double dsum = -du.dot(u) / sum;
                out.dT[i] += dsum;
                out.dT[i + 1] += dsum;
            }
        }

        // Acceleration proxy a = 2 ((next - cur)/tp - (cur - prev)/tm) / (tm + tp)
        const double rhoA = w.rho_a * scale;
        if (rhoA != 0.0) {
            const Eigen::Vector3d fwd = next - cur;
            const Eigen::Vector3d bwd = cur - prev;
            const Eigen::Vector3d a = 2.0 * (fwd / tp - bwd / tm) / sum;
            const double viol = a.squaredNorm() - w.a_max * w.a_max;
            if (viol > 0.0) {
                out.cost += rhoA * viol * viol * viol;
                const double dg = rhoA * 3.0 * viol * viol;
                const Eigen::Vector3d da = dg * 2.0 * a;
                addPoint(i + 1, da * (2.0 / (sum * tp)));
                addPoint(i - 1, da * (2.0 / (sum * tm)));
                out.dq.row(i) -= (da * (2.0 / sum) * (1.0 / tp + 1.0 / tm)).transpose();
                // a depends on tp and tm directly and through the 1/sum factor
                out.dT[i + 1] += da.dot(-2.0 * fwd / (sum * tp * tp) - a / sum);
                out.dT[i] += da.dot(2.0 * bwd / (sum * tm * tm) - a / sum);
            }
        }
    }
    return out;
}

CostGrad energy_cost_grad(const CorridorProblem &p)
{
    const MinEnergySolution sol = solve_min_energy(energy_problem(p));
    const ParameterGradient g = parameter_gradient(sol);
    return {sol.energy, g.dq, g.dT};
}

CostGrad total_cost_grad(const CorridorProblem &p)
{
    CostGrad total = barrier_cost_grad(p);
    if (!std::isfinite(total.cost))
        return total;
    const CostGrad dyn = dynamic_penalty_cost_grad(p);
    const CostGrad en = energy_cost_grad(p);
    total.cost += dyn.cost + en.cost;
    total.dq += dyn.dq + en.dq;
    total.dT += dyn.dT + en.dT;
    return total;
}

Trajectory corridor_trajectory(const CorridorProblem &p)
{
    return solve_min_energy(energy_problem(p)).trajectory;
}

OptimizeResult optimize(const CorridorProblem &problem, const LbfgsConfig &cfg,
                        const OptimizeOptions &opts)
{
    using Clock = std::chrono::steady_clock;
    const auto deadline =
        opts.started.value_or(Clock::now()) +
        std::chrono::duration_cast<Clock::duration>(opts.timeout);
    const int m = problem.pieceCount();
    if (problem.q.rows() != m - 1 || problem.T.size() != m ||
        problem.piece_scale.size() != m)
        throw InvalidArgument("corridor problem sizes are inconsistent");
    for (int i = 0; i + 1 < m; ++i) {
        const Eigen::Vector3d x = problem.q.row(i).transpose();
        if (!problem.corridor.polyhedra[i].strictlyContains(x) ||
            !problem.corridor.polyhedra[i + 1].strictlyContains(x))
            throw InvalidArgument("initial waypoint " + std::to_string(i) +
                                  " is outside its polyhedron intersection");
    }
    if ((problem.T.array() <= 0.0).any())
        throw InvalidArgument("initial piece times must be positive");

    const Eigen::Index nq = Eigen::Index(m - 1) * 3;
    CorridorProblem work = problem;

    auto unpack = [&](const Eigen::VectorXd &x) {
        for (int i = 0; i + 1 < m; ++i)
            work.q.row(i) = x.segment<3>(Eigen::Index(i) * 3).transpose();
        work.T = x.tail(m).array().exp();
    };

    OptimizeResult res;
    bool enforceDeadline = false;
    const Objective objective = [&](const Eigen::VectorXd &x, Eigen::VectorXd &grad) {
        if (enforceDeadline && Clock::now() >= deadline) {
            res.timed_out = true;
            return kInf;
        }
        if (!x.allFinite())
            return kInf;
        unpack(x);
        if (!work.T.allFinite() || (work.T.array() <= 1e-9).any())
            return kInf;
        CostGrad cg;
        try {
            cg = total_cost_grad(work);
        } catch (const SingularMatrixError &) {
            return kInf;
        }
        if (!std::isfinite(cg.cost))
            return kInf;
        grad.resize(x.size());
        for (int i = 0; i + 1 < m; ++i)
            grad.segment<3>(Eigen::Index(i) * 3) = cg.dq.row(i).transpose();
        grad.tail(m) = cg.dT.cwiseProduct(work.T); // chain rule through T = exp(tau)
        return cg.cost;
    };

    Eigen::VectorXd x0(nq + m);
    for (int i = 0; i + 1 < m; ++i)
        x0.segment<3>(Eigen::Index(i) * 3) = problem.q.row(i).transpose();
    x0.tail(m) = problem.T.array().log();

    {
        Eigen::VectorXd g0;
        const double c0 = objective(x0, g0);
        if (!std::isfinite(c0))
            throw InvalidArgument("initial point is outside the barrier domain");
        res.cost_history.push_back(c0);
    }
    enforceDeadline = true;

    const LbfgsProgress progress = [&](const LbfgsIteration &it) {
        res.cost_history.push_back(it.cost);
        if (Clock::now() >= deadline) {
            res.timed_out = true;
            return false;
        }
        return true;
    };

    LbfgsResult lr;
    if (Clock::now() >= deadline) {
        res.timed_out = true;
        lr.x = x0;
        lr.status = LbfgsStatus::Stopped;
    } else {
        lr = minimize(objective, x0, cfg, progress);
    }
    res.status = lr.status;
    unpack(lr.x);
    res.q = work.q;
    res.T = work.T;
    res.trajectory = corridor_trajectory(work);
    return res;
}

RefineResult refine(const CorridorProblem &problem, const std::vector<PieceVerdict> &verdicts,
                    const RefineOptions &opts)
{
    const int m = problem.pieceCount();
    if (static_cast<int>(verdicts.size()) != m)
        throw InvalidArgument("one verdict per piece is required");

    RefineResult out{problem, 0, {}};
    if (std::all_of(verdicts.begin(), verdicts.end(), [](const PieceVerdict &v) { return v.ok(); }))
        return out;

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    const double tilt = opts.tilt_degrees * M_PI / 180.0;

    std::vector<Polyhedron> polys;
    std::vector<Eigen::Vector3d> points; // interior waypoints
    std::vector<double> times, scales;

    for (int i = 0; i < m; ++i) {
        const Eigen::Vector3d from = problem.point(i - 1);
        const Eigen::Vector3d to = problem.point(i);
        const Polyhedron &poly = problem.corridor.polyhedra[i];
        bool split = false;
        if (!verdicts[i].ok()) {
            const Eigen::Vector3d chord = to - from;
            const double len = chord.norm();
            if (len > 0.0) {
                const Eigen::Vector3d n = chord / len;
                const Eigen::Vector3d mid = 0.5 * (from + to);
                Eigen::Vector3d axis;
                do {
                    const Eigen::Vector3d r(normal(rng), normal(rng), normal(rng));
                    axis = r - r.dot(n) * n;
                } while (axis.norm() < 1e-6);
                axis.normalize();
                const Eigen::Vector3d n0 = Eigen::AngleAxisd(tilt, axis) * n;
                const Eigen::Vector3d n1 = Eigen::AngleAxisd(-tilt, axis) * n;
                const double slack = opts.slack_ratio * len;

                Polyhedron first = poly;
                first.addFacet(n0, n0.dot(mid) + slack);
                Polyhedron second = poly;
                second.addFacet(-n1, -n1.dot(mid) + slack);

                const Polyhedron both = first.intersect(second);
                std::optional<Eigen::Vector3d> wp;
                if (both.strictlyContains(mid))
                    wp = mid;
                else
                    wp = interior_point(both);
                if (wp) {
                    polys.push_back(std::move(first));
                    polys.push_back(std::move(second));
                    points.push_back(*wp);
                    times.push_back(0.5 * problem.T[i]);
                    times.push_back(0.5 * problem.T[i]);
                    const double sc = problem.piece_scale[i] * opts.weight_multiplier;
                    scales.push_back(sc);
                    scales.push_back(sc);
                    ++out.split_pieces;
                    split = true;
                } else {
                    out.failed_pieces.push_back(i);
                }
            } else {
                out.failed_pieces.push_back(i);
            }
        }
        if (!split) {
            polys.push_back(poly);
            times.push_back(problem.T[i]);
            scales.push_back(problem.piece_scale[i]);
        }
        if (i + 1 < m)
            points.push_back(to);
    }

    CorridorProblem &np = out.problem;
    np.corridor.polyhedra = std::move(polys);
    const int nm = np.corridor.size();
    np.q.resize(nm - 1, 3);
    for (int i = 0; i + 1 < nm; ++i)
        np.q.row(i) = points[i].transpose();
    np.T = Eigen::Map<const Eigen::VectorXd>(times.data(), nm);
    np.piece_scale = Eigen::Map<const Eigen::VectorXd>(scales.data(), nm);
    return out;
}

PlanResult plan(CorridorProblem problem, const LbfgsConfig &cfg, const PlanOptions &opts)
{
    OptimizeOptions oo;
    oo.timeout = opts.timeout;
    oo.started = opts.started.value_or(std::chrono::steady_clock::now());
    PlanResult res;
    for (int round = 0;; ++round) {
        const OptimizeResult opt = optimize(problem, cfg, oo);
        res.round_starts.push_back(static_cast<int>(res.cost_history.size()));
        res.cost_history.insert(res.cost_history.end(), opt.cost_history.begin(),
                                opt.cost_history.end());
        problem.q = opt.q;
        problem.T = opt.T;
        res.trajectory = opt.trajectory;
        res.final_cost = opt.cost_history.back();
        res.timed_out = opt.timed_out;
        res.verdicts = check_feasibility(opt.trajectory, problem.corridor,
                                         problem.weights.v_max, problem.weights.a_max,
                                         opts.feasibility);
        res.feasible = std::all_of(res.verdicts.begin(), res.verdicts.end(),
                                   [](const PieceVerdict &v) { return v.ok(); });
        if (res.feasible || round >= opts.max_refine_rounds || opt.timed_out)
            break;
        RefineResult rr = refine(problem, res.verdicts, opts.refinement);
        if (rr.split_pieces == 0)
            break;
        problem = std::move(rr.problem);
        res.refine_rounds = round + 1;
    }
    res.problem = std::move(problem);
    return res;
}

} // namespace lstraj
