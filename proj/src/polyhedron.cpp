#include "lstraj/polyhedron.hpp"

#include <cmath>

namespace lstraj {

bool Polyhedron::contains(const Eigen::Vector3d &x, double tol) const
{
    return (slack(x).array() >= -tol).all();
}

bool Polyhedron::strictlyContains(const Eigen::Vector3d &x) const
{
    return (slack(x).array() > 0.0).all();
}

Polyhedron Polyhedron::intersect(const Polyhedron &other) const
{
    Polyhedron out;
    out.A.resize(A.rows() + other.A.rows(), 3);
    out.A << A, other.A;
    out.b.resize(b.size() + other.b.size());
    out.b << b, other.b;
    return out;
}

void Polyhedron::addFacet(const Eigen::Vector3d &normal, double offset)
{
    const Eigen::Index k = A.rows();
    A.conservativeResize(k + 1, 3);
    b.conservativeResize(k + 1);
    A.row(k) = normal.transpose();
    b[k] = offset;
}

Polyhedron Polyhedron::box(const Eigen::Vector3d &lo, const Eigen::Vector3d &hi)
{
    Polyhedron p;
    p.A.resize(6, 3);
    p.b.resize(6);
    for (int k = 0; k < 3; ++k) {
        p.A.row(2 * k) = Eigen::RowVector3d::Unit(k);
        p.b[2 * k] = hi[k];
        p.A.row(2 * k + 1) = -Eigen::RowVector3d::Unit(k);
        p.b[2 * k + 1] = -lo[k];
    }
    return p;
}

std::vector<Eigen::Vector3d> enumerate_vertices(const Polyhedron &p, double tol)
{
    std::vector<Eigen::Vector3d> verts;
    const int k = p.facets();
    // Normalize rows so tolerances are geometric distances.
    Eigen::Matrix<double, Eigen::Dynamic, 3> a = p.A;
    Eigen::VectorXd b = p.b;
    for (int i = 0; i < k; ++i) {
        const double n = a.row(i).norm();
        if (n > 0.0) {
            a.row(i) /= n;
            b[i] /= n;
        }
    }
    Eigen::Matrix3d m;
    Eigen::Vector3d rhs;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            for (int l = j + 1; l < k; ++l) {
                m.row(0) = a.row(i);
                m.row(1) = a.row(j);
                m.row(2) = a.row(l);
                if (std::abs(m.determinant()) < 1e-12)
                    continue;
                rhs << b[i], b[j], b[l];
                const Eigen::Vector3d x = m.partialPivLu().solve(rhs);
                if (((b - a * x).array() < -tol).any())
                    continue;
                bool dup = false;
                for (const auto &v : verts)
                    if ((v - x).norm() < 1e3 * tol) {
                        dup = true;
                        break;
                    }
                if (!dup)
                    verts.push_back(x);
            }
    return verts;
}

std::optional<Eigen::Vector3d> interior_point(const Polyhedron &p)
{
    const auto verts = enumerate_vertices(p);
    if (verts.size() < 4)
        return std::nullopt;
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (const auto &v : verts)
        c += v;
    c /= static_cast<double>(verts.size());
    if (!p.strictlyContains(c))
        return std::nullopt;
    return c;
}

void FlightCorridor::validate() const
{
    const int m = size();
    if (m < 1)
        throw CorridorError(0, 0, "corridor has no polyhedra");
    for (int i = 0; i < m; ++i)
        if (enumerate_vertices(polyhedra[i]).size() < 4)
            throw CorridorError(i, i, "polyhedron " + std::to_string(i) + " is empty or unbounded");
    if (!polyhedra.front().strictlyContains(start))
        throw CorridorError(0, 0, "start is not inside the first polyhedron");
    if (!polyhedra.back().strictlyContains(goal))
        throw CorridorError(m - 1, m - 1, "goal is not inside the last polyhedron");
    for (int i = 0; i + 1 < m; ++i)
        if (!interior_point(polyhedra[i].intersect(polyhedra[i + 1])))
            throw CorridorError(i, i + 1,
                                "polyhedra " + std::to_string(i) + " and " +
                                    std::to_string(i + 1) + " do not overlap");
    for (int i = 0; i + 2 < m; ++i)
        if (!enumerate_vertices(polyhedra[i].intersect(polyhedra[i + 2])).empty())
            throw CorridorError(i, i + 2,
                                "polyhedra " + std::to_string(i) + " and " +
                                    std::to_string(i + 2) + " intersect");
}

} // namespace lstraj
