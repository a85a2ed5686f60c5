#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lstraj {

/// Convex polyhedron {x : A x <= b} in R^3.
struct Polyhedron {
    Eigen::Matrix<double, Eigen::Dynamic, 3> A;
    Eigen::VectorXd b;

    int facets() const { return static_cast<int>(b.size()); }

    /// b - A x, positive entries mean strictly inside that facet.
    Eigen::VectorXd slack(const Eigen::Vector3d &x) const { return b - A * x; }
    bool contains(const Eigen::Vector3d &x, double tol = 0.0) const;
    bool strictlyContains(const Eigen::Vector3d &x) const;

    /// Stack of both facet sets.
    Polyhedron intersect(const Polyhedron &other) const;

    /// Appends one facet n.x <= offset.
    void addFacet(const Eigen::Vector3d &normal, double offset);

    /// Axis-aligned box [lo, hi].
    static Polyhedron box(const Eigen::Vector3d &lo, const Eigen::Vector3d &hi);
};

/// Vertices of a bounded polyhedron by exhaustive facet-triple enumeration.
std::vector<Eigen::Vector3d> enumerate_vertices(const Polyhedron &p, double tol = 1e-9);

/// Average of the vertex set, if it lies strictly inside p.
std::optional<Eigen::Vector3d> interior_point(const Polyhedron &p);

/// Raised when a corridor violates its structural invariants. `first` and
/// `second` name the offending polyhedron pair (0-based); equal when only one is involved.
class CorridorError : public std::runtime_error {
public:
    CorridorError(int first, int second, const std::string &what)
        : std::runtime_error(what), first_(first), second_(second) {}
    int first() const noexcept { return first_; }
    int second() const noexcept { return second_; }

private:
    int first_, second_;
};

/// Ordered chain of overlapping polyhedra with start in the first and goal in the last.
struct FlightCorridor {
    std::vector<Polyhedron> polyhedra;
    Eigen::Vector3d start = Eigen::Vector3d::Zero();
    Eigen::Vector3d goal = Eigen::Vector3d::Zero();

    int size() const { return static_cast<int>(polyhedra.size()); }

    /// Checks endpoint membership, overlap of neighbours and separation of
    /// polyhedra two apart. Throws CorridorError.
    void validate() const;
};

} // namespace lstraj
