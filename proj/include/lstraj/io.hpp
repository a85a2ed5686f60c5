#pragma once

#include "lstraj/min_energy.hpp"
#include "lstraj/polyhedron.hpp"
#include "lstraj/spline.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace lstraj {

/// Malformed or structurally invalid input document.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// {"s", "dim", "durations", "pieces": [[[row of D coefficients] x 2s] x M]}
std::string trajectory_to_json(const Trajectory &traj);
Trajectory trajectory_from_json(const std::string &text);

/// {"s", "dim", "durations", "d0", "dM", "waypoints"}
MinEnergyProblem problem_from_json(const std::string &text);
std::string problem_to_json(const MinEnergyProblem &problem);

/// {"polyhedra": [{"A": [[...]], "b": [...]}], "start": [...], "goal": [...]}
FlightCorridor corridor_from_json(const std::string &text);
std::string corridor_to_json(const FlightCorridor &corridor);

/// Rows t, pos..., vel..., acc... sampled every 1/rate seconds plus the final time.
void write_samples_csv(std::ostream &os, const Trajectory &traj, double rate);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &contents);

} // namespace lstraj
