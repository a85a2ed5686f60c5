#include "lstraj/io.hpp"

#include "lstraj/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace lstraj {

using nlohmann::json;

namespace {

json parse(const std::string &text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        // Translate the byte offset into a line number for the diagnostic.
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
        throw FormatError("malformed JSON at line " + std::to_string(line) + ": " + e.what());
    }
}

const json &require(const json &doc, const char *key)
{
    if (!doc.is_object() || !doc.contains(key))
        throw FormatError(std::string("missing key \"") + key + "\"");
    return doc.at(key);
}

template <typename T>
T as(const json &j, const char *what)
{
    try {
        return j.get<T>();
    } catch (const json::exception &) {
        throw FormatError(std::string("wrong type for ") + what);
    }
}

Eigen::MatrixXd matrix(const json &j, const char *what, Eigen::Index cols)
{
    if (!j.is_array())
        throw FormatError(std::string(what) + " must be an array of rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const auto row = as<std::vector<double>>(j[r], what);
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw FormatError(std::string(what) + " row " + std::to_string(r) + " has " +
                              std::to_string(row.size()) + " entries, expected " +
                              std::to_string(cols));
        for (Eigen::Index c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), c) = row[c];
    }
    return m;
}

json rows(const Eigen::Ref<const Eigen::MatrixXd> &m)
{
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::VectorXd vector(const json &j, const char *what)
{
    const auto v = as<std::vector<double>>(j, what);
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd &v) { return {v.data(), v.data() + v.size()}; }

} // namespace

std::string trajectory_to_json(const Trajectory &traj)
{
    json doc;
    doc["s"] = traj.order();
    doc["dim"] = traj.dim();
    doc["durations"] = to_std(traj.times().durations());
    json pieces = json::array();
    for (int i = 0; i < traj.pieceCount(); ++i)
        pieces.push_back(rows(traj.piece(i)));
    doc["pieces"] = std::move(pieces);
    return doc.dump(2);
}

Trajectory trajectory_from_json(const std::string &text)
{
    const json doc = parse(text);
    const int s = as<int>(require(doc, "s"), "s");
    const int dim = as<int>(require(doc, "dim"), "dim");
    const Eigen::VectorXd durations = vector(require(doc, "durations"), "durations");
    const json &pieces = require(doc, "pieces");
    if (!pieces.is_array() || pieces.size() != static_cast<std::size_t>(durations.size()))
        throw FormatError("pieces must match durations in length");
    if (s < 1 || dim < 1)
        throw FormatError("s and dim must be positive");
    Eigen::MatrixXd coeffs(Eigen::Index(2) * s * durations.size(), dim);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const Eigen::MatrixXd c = matrix(pieces[i], "piece", dim);
        if (c.rows() != 2 * s)
            throw FormatError("piece " + std::to_string(i) + " needs 2s coefficient rows");
        coeffs.middleRows(Eigen::Index(i) * 2 * s, 2 * s) = c;
    }
    return Trajectory(s, PieceTimes(durations), std::move(coeffs));
}

MinEnergyProblem problem_from_json(const std::string &text)
{
    const json doc = parse(text);
    MinEnergyProblem p;
    p.s = as<int>(require(doc, "s"), "s");
    const int dim = as<int>(require(doc, "dim"), "dim");
    if (dim < 1)
        throw FormatError("dim must be positive");
    const Eigen::VectorXd durations = vector(require(doc, "durations"), "durations");
    p.spec.d0 = matrix(require(doc, "d0"), "d0", dim);
    p.spec.dM = matrix(require(doc, "dM"), "dM", dim);
    p.spec.waypoints =
        doc.contains("waypoints") ? matrix(doc.at("waypoints"), "waypoints", dim)
                                  : Eigen::MatrixXd(0, dim);
    if (durations.size() == 0)
        throw FormatError("durations must not be empty");
    try {
        p.spec.validate(p.s, static_cast<int>(durations.size()));
    } catch (const InvalidArgument &e) {
        throw FormatError(e.what());
    }
    if (p.s < 2 || p.s > kMaxOrder)
        throw FormatError("s must lie in [2, 5]");
    // Duration positivity is checked by PieceTimes (InvalidArgument), not here.
    p.times = PieceTimes(durations);
    return p;
}

std::string problem_to_json(const MinEnergyProblem &p)
{
    json doc;
    doc["s"] = p.s;
    doc["dim"] = p.dim();
    doc["durations"] = to_std(p.times.durations());
    doc["d0"] = rows(p.spec.d0);
    doc["dM"] = rows(p.spec.dM);
    doc["waypoints"] = rows(p.spec.waypoints);
    return doc.dump(2);
}

FlightCorridor corridor_from_json(const std::string &text)
{
    const json doc = parse(text);
    FlightCorridor c;
    const json &polys = require(doc, "polyhedra");
    if (!polys.is_array())
        throw FormatError("polyhedra must be an array");
    for (const json &pj : polys) {
        Polyhedron p;
        const Eigen::MatrixXd a = matrix(require(pj, "A"), "A", 3);
        p.A = a;
        p.b = vector(require(pj, "b"), "b");
        if (p.b.size() != a.rows())
            throw FormatError("polyhedron A and b disagree in facet count");
        c.polyhedra.push_back(std::move(p));
    }
    const Eigen::VectorXd start = vector(require(doc, "start"), "start");
    const Eigen::VectorXd goal = vector(require(doc, "goal"), "goal");
    if (start.size() != 3 || goal.size() != 3)
        throw FormatError("start and goal must be 3-vectors");
    c.start = start;
    c.goal = goal;
    return c;
}

std::string corridor_to_json(const FlightCorridor &c)
{
    json doc;
    json polys = json::array();
    for (const auto &p : c.polyhedra)
        polys.push_back({{"A", rows(p.A)}, {"b", to_std(p.b)}});
    doc["polyhedra"] = std::move(polys);
    doc["start"] = {c.start.x(), c.start.y(), c.start.z()};
    doc["goal"] = {c.goal.x(), c.goal.y(), c.goal.z()};
    return doc.dump(2);
}

void write_samples_csv(std::ostream &os, const Trajectory &traj, double rate)
{
    if (!(rate > 0.0))
        throw InvalidArgument("sampling rate must be positive");
    const int dim = traj.dim();
    static const char *axes[] = {"x", "y", "z"};
    auto axis = [&](int d) { return dim <= 3 ? std::string(axes[d]) : std::to_string(d); };
    os << "t";
    for (const char *kind : {"pos", "vel", "acc"})
        for (int d = 0; d < dim; ++d)
            os << ',' << kind << '_' << axis(d);
    os << '\n';
    os << std::setprecision(12);
    const double total = traj.totalDuration();
    const auto count = static_cast<long long>(std::floor(total * rate + 1e-9));
    auto emit = [&](double t) {
        os << t;
        for (int k = 0; k < 3; ++k) {
            const Eigen::VectorXd v = eval(traj, t, k);
            for (int d = 0; d < dim; ++d)
                os << ',' << v[d];
        }
        os << '\n';
    };
    for (long long k = 0; k <= count; ++k)
        emit(std::min(total, static_cast<double>(k) / rate));
    if (static_cast<double>(count) / rate < total - 1e-12)
        emit(total);
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << contents;
}

} // namespace lstraj
