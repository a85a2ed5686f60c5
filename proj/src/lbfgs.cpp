#include "lstraj/lbfgs.hpp"

#include "lstraj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace lstraj {

void LbfgsConfig::validate() const
{
    if (!(0.0 < c1 && c1 < c2 && c2 < 1.0))
        throw InvalidArgument("Wolfe constants must satisfy 0 < c1 < c2 < 1");
    if (memory < 1)
        throw InvalidArgument("L-BFGS memory must be at least 1");
    if (past < 1)
        throw InvalidArgument("past must be at least 1");
    if (max_iters < 0 || max_linesearch_steps < 1)
        throw InvalidArgument("iteration caps must be positive");
}

std::string_view to_string(LbfgsStatus status)
{
    switch (status) {
    case LbfgsStatus::GradientConverged: return "gradient_converged";
    case LbfgsStatus::CostConverged: return "cost_converged";
    case LbfgsStatus::MaxIterations: return "max_iterations";
    case LbfgsStatus::LineSearchFailed: return "line_search_failed";
    case LbfgsStatus::Stopped: return "stopped";
    }
    return "unknown";
}

namespace {

struct TrialPoint {
    double step = 0.0;
    double cost = 0.0;
    double slope = 0.0; // directional derivative
    bool finite() const { return std::isfinite(cost) && std::isfinite(slope); }
};

// Minimizer of the cubic matching values and slopes at a and b; falls back to bisection.
double cubic_step(const TrialPoint &a, const TrialPoint &b)
{
    if (!a.finite() || !b.finite())
        return 0.5 * (a.step + b.step);
    const double d1 = a.slope + b.slope - 3.0 * (a.cost - b.cost) / (a.step - b.step);
    const double disc = d1 * d1 - a.slope * b.slope;
    if (disc < 0.0)
        return 0.5 * (a.step + b.step);
    const double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
    const double denom = b.slope - a.slope + 2.0 * d2;
    if (denom == 0.0)
        return 0.5 * (a.step + b.step);
    return b.step - (b.step - a.step) * (b.slope + d2 - d1) / denom;
}

class LineSearch {
public:
    LineSearch(const Objective &f, const LbfgsConfig &cfg, const Eigen::VectorXd &x,
               const Eigen::VectorXd &dir, double f0, double slope0)
        : f_(f), cfg_(cfg), x_(x), dir_(dir), f0_(f0), slope0_(slope0)
    {
    }

    // Returns true with the accepted point in xOut/gOut/fOut on success.
    bool run(double step, Eigen::VectorXd &xOut, Eigen::VectorXd &gOut, double &fOut)
    {
        TrialPoint prev{0.0, f0_, slope0_};
        for (int i = 0; evals_ < cfg_.max_linesearch_steps; ++i) {
            TrialPoint cur = evaluate(step);
            if (!cur.finite() || violatesDecrease(cur) || (i > 0 && cur.cost >= prev.cost))
                return zoom(prev, cur, xOut, gOut, fOut);
            if (std::abs(cur.slope) <= -cfg_.c2 * slope0_)
                return accept(xOut, gOut, fOut);
            if (cur.slope >= 0.0)
                return zoom(cur, prev, xOut, gOut, fOut);
            prev = cur;
            step *= 2.0;
        }
        return false;
    }

    int evaluations() const { return evals_; }
    double acceptedStep() const { return lastStep_; }
    double acceptedSlope() const { return lastSlope_; }

private:
    bool violatesDecrease(const TrialPoint &p) const
    {
        return p.cost > f0_ + cfg_.c1 * p.step * slope0_;
    }

    TrialPoint evaluate(double step)
    {
        ++evals_;
        trialX_ = x_ + step * dir_;
        trialG_.resize(x_.size());
        const double cost = f_(trialX_, trialG_);
        TrialPoint p{step, cost, std::numeric_limits<double>::infinity()};
        if (std::isfinite(cost)) {
            p.slope = trialG_.dot(dir_);
            if (!std::isfinite(p.slope))
                p.cost = std::numeric_limits<double>::infinity();
        } else {
            p.cost = std::numeric_limits<double>::infinity();
        }
        lastStep_ = step;
        lastSlope_ = p.slope;
        lastCost_ = p.cost;
        return p;
    }

    bool accept(Eigen::VectorXd &xOut, Eigen::VectorXd &gOut, double &fOut)
    {
        xOut = trialX_;
        gOut = trialG_;
        fOut = lastCost_;
        return true;
    }

    bool zoom(TrialPoint lo, TrialPoint hi, Eigen::VectorXd &xOut, Eigen::VectorXd &gOut,
              double &fOut)
    {
        while (evals_ < cfg_.max_linesearch_steps) {
            const double width = hi.step - lo.step;
            if (std::abs(width) < 1e-16 * std::max(1.0, std::abs(lo.step)))
                return false;
            double step;
            if (!hi.finite()) {
                step = lo.step + 0.1 * (hi.step - lo.step);
            } else {
                step = cubic_step(lo, hi);
                const double a = std::min(lo.step, hi.step);
                const double b = std::max(lo.step, hi.step);
                const double margin = 0.1 * (b - a);
                if (!(step > a + margin && step < b - margin))
                    step = 0.5 * (lo.step + hi.step);
            }
            TrialPoint cur = evaluate(step);
            if (!cur.finite() || violatesDecrease(cur) || cur.cost >= lo.cost) {
                hi = cur;
            } else {
                if (std::abs(cur.slope) <= -cfg_.c2 * slope0_)
                    return accept(xOut, gOut, fOut);
                if (cur.slope * (hi.step - lo.step) >= 0.0)
                    hi = lo;
                lo = cur;
            }
        }
        return false;
    }

    const Objective &f_;
    const LbfgsConfig &cfg_;
    const Eigen::VectorXd &x_;
    const Eigen::VectorXd &dir_;
    double f0_;
    double slope0_;
    int evals_ = 0;
    double lastStep_ = 0.0;
    double lastSlope_ = 0.0;
    double lastCost_ = 0.0;
    Eigen::VectorXd trialX_, trialG_;
};

} // namespace

LbfgsResult minimize(const Objective &f, Eigen::VectorXd x0, const LbfgsConfig &cfg,
                     const LbfgsProgress &progress)
{
    cfg.validate();
    LbfgsResult res;
    res.x = std::move(x0);
    Eigen::VectorXd g(res.x.size());
    res.cost = f(res.x, g);
    res.evaluations = 1;
    if (!std::isfinite(res.cost) || !g.allFinite())
        throw InvalidArgument("objective or gradient is not finite at the initial point");

    if (g.lpNorm<Eigen::Infinity>() <= cfg.grad_tol) {
        res.status = LbfgsStatus::GradientConverged;
        return res;
    }

    std::vector<double> costs{res.cost};
    std::deque<Eigen::VectorXd> sHist, yHist;
    std::deque<double> rhoHist;
    Eigen::VectorXd dir = -g;
    Eigen::VectorXd xNew, gNew;
    double step = 1.0 / dir.norm();

    for (int k = 0; k < cfg.max_iters; ++k) {
        double slope0 = g.dot(dir);
        if (!(slope0 < 0.0)) {
            sHist.clear();
            yHist.clear();
            rhoHist.clear();
            dir = -g;
            slope0 = g.dot(dir);
            step = 1.0 / dir.norm();
        }

        LineSearch ls(f, cfg, res.x, dir, res.cost, slope0);
        double fNew = 0.0;
        const bool ok = ls.run(step, xNew, gNew, fNew);
        res.evaluations += ls.evaluations();
        if (!ok) {
            if (sHist.empty()) {
                res.status = LbfgsStatus::LineSearchFailed;
                return res;
            }
            // Retry this iteration along steepest descent with a fresh memory.
            sHist.clear();
            yHist.clear();
            rhoHist.clear();
            dir = -g;
            step = 1.0 / dir.norm();
            --k;
            continue;
        }

        const double fPrev = res.cost;
        Eigen::VectorXd s = xNew - res.x;
        Eigen::VectorXd y = gNew - g;
        res.x.swap(xNew);
        g.swap(gNew);
        res.cost = fNew;
        res.iterations = k + 1;

        if (progress) {
            const LbfgsIteration info{k + 1, fNew, ls.acceptedStep(), fPrev, slope0,
                                      ls.acceptedSlope(), &res.x};
            if (!progress(info)) {
                res.status = LbfgsStatus::Stopped;
                return res;
            }
        }

        if (g.lpNorm<Eigen::Infinity>() <= cfg.grad_tol) {
            res.status = LbfgsStatus::GradientConverged;
            return res;
        }
        costs.push_back(fNew);
        const double fPast = costs.size() > static_cast<std::size_t>(cfg.past)
                                 ? costs[costs.size() - 1 - cfg.past]
                                 : costs.front();
        const double scale = std::max({std::abs(fPast), std::abs(fNew), 1e-300});
        if (costs.size() > static_cast<std::size_t>(cfg.past) &&
            fPast - fNew <= cfg.rel_cost_tol * scale) {
            res.status = LbfgsStatus::CostConverged;
            return res;
        }

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (static_cast<int>(sHist.size()) == cfg.memory) {
                sHist.pop_front();
                yHist.pop_front();
                rhoHist.pop_front();
            }
            sHist.push_back(std::move(s));
            rhoHist.push_back(1.0 / sy);
            yHist.push_back(std::move(y));
        }

        // Two-loop recursion.
        dir = -g;
        const int m = static_cast<int>(sHist.size());
        std::vector<double> alpha(m);
        for (int i = m - 1; i >= 0; --i) {
            alpha[i] = rhoHist[i] * sHist[i].dot(dir);
            dir -= alpha[i] * yHist[i];
        }
        if (m > 0)
            dir *= 1.0 / (rhoHist[m - 1] * yHist[m - 1].squaredNorm());
        for (int i = 0; i < m; ++i) {
            const double beta = rhoHist[i] * yHist[i].dot(dir);
            dir += (alpha[i] - beta) * sHist[i];
        }
        step = 1.0;
    }
    res.status = LbfgsStatus::MaxIterations;
    return res;
}

} // namespace lstraj
