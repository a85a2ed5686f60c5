#include "lstraj/corridor_opt.hpp"

#include "lstraj/errors.hpp"

#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>

namespace lstraj {

namespace {

// Polynomial coefficients, lowest degree first.
using Poly = Eigen::VectorXd;

Poly derivative(const Poly &p)
{
    if (p.size() <= 1)
        return Poly::Zero(1);
    Poly d(p.size() - 1);
    for (Eigen::Index k = 1; k < p.size(); ++k)
        d[k - 1] = k * p[k];
    return d;
}

Poly product(const Poly &a, const Poly &b)
{
    Poly r = Poly::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

double evaluate(const Poly &p, double t)
{
    double v = 0.0;
    for (Eigen::Index k = p.size() - 1; k >= 0; --k)
        v = v * t + p[k];
    return v;
}

// Real roots of p inside (0, t) found from the companion matrix.
std::vector<double> roots_in(const Poly &p, double t)
{
    std::vector<double> out;
    const double scale = p.cwiseAbs().maxCoeff();
    if (!(scale > 0.0))
        return out;
    Eigen::Index deg = p.size() - 1;
    while (deg > 0 && std::abs(p[deg]) <= 1e-14 * scale)
        --deg;
    if (deg < 1)
        return out;
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(Poly(p.head(deg + 1)));
    for (Eigen::Index k = 0; k < solver.roots().size(); ++k) {
        const auto r = solver.roots()[k];
        if (std::abs(r.imag()) <= 1e-7 * (1.0 + std::abs(r.real())) && r.real() > 0.0 &&
            r.real() < t)
            out.push_back(r.real());
    }
    return out;
}

// Maximum of p over [0, t] from endpoints, stationary points and uniform samples.
double max_over(const Poly &p, double t, int samples)
{
    double best = std::max(evaluate(p, 0.0), evaluate(p, t));
    for (double r : roots_in(derivative(p), t))
        best = std::max(best, evaluate(p, r));
    for (int k = 1; k < samples; ++k)
        best = std::max(best, evaluate(p, t * k / samples));
    return best;
}

} // namespace

std::vector<PieceVerdict> check_feasibility(const Trajectory &traj, const FlightCorridor &corridor,
                                            double v_max, double a_max,
                                            const FeasibilityOptions &opts)
{
    const int m = traj.pieceCount();
    if (corridor.size() != m)
        throw InvalidArgument("trajectory pieces and corridor polyhedra differ in count");
    if (traj.dim() != 3)
        throw InvalidArgument("corridor checks need a 3-D trajectory");

    std::vector<PieceVerdict> out(m);
    for (int i = 0; i < m; ++i) {
        const double t = traj.times()[i];
        const Eigen::MatrixXd c = traj.piece(i);
        std::array<Poly, 3> pos, vel, acc;
        for (int d = 0; d < 3; ++d) {
            pos[d] = c.col(d);
            vel[d] = derivative(pos[d]);
            acc[d] = derivative(vel[d]);
        }
        Poly v2 = product(vel[0], vel[0]) + product(vel[1], vel[1]) + product(vel[2], vel[2]);
        Poly a2 = product(acc[0], acc[0]) + product(acc[1], acc[1]) + product(acc[2], acc[2]);

        PieceVerdict &v = out[i];
        v.max_velocity = std::sqrt(std::max(0.0, max_over(v2, t, opts.samples_per_piece)));
        v.max_acceleration = std::sqrt(std::max(0.0, max_over(a2, t, opts.samples_per_piece)));
        v.dynamic = v.max_velocity <= v_max * (1.0 + opts.dynamic_tol) &&
                    v.max_acceleration <= a_max * (1.0 + opts.dynamic_tol);

        const Polyhedron &poly = corridor.polyhedra[i];
        double worst = -std::numeric_limits<double>::infinity();
        for (int f = 0; f < poly.facets(); ++f) {
            Poly g = poly.A(f, 0) * pos[0] + poly.A(f, 1) * pos[1] + poly.A(f, 2) * pos[2];
            g[0] -= poly.b[f];
            worst = std::max(worst, max_over(g, t, opts.samples_per_piece));
        }
        v.max_facet_violation = worst;
        v.safe = worst <= opts.safety_tol;
    }
    return out;
}

} // namespace lstraj
