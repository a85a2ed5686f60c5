#include "lstraj/bench.hpp"

#include "lstraj/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ostream>
#include <thread>

namespace lstraj {

void BenchSpec::validate() const
{
    if (trials < 1)
        throw InvalidArgument("trials must be at least 1");
    if (s_values.empty() || piece_counts.empty())
        throw InvalidArgument("bench needs at least one order and one piece count");
    for (int s : s_values)
        if (s < 2 || s > kMaxOrder)
            throw InvalidArgument("bench order must lie in [2, 5]");
    if (!std::is_sorted(piece_counts.begin(), piece_counts.end()) || piece_counts.front() < 1)
        throw InvalidArgument("piece counts must be positive and ascending");
}

MinEnergyProblem random_instance(int s, int pieces, SplitMix64 &rng)
{
    MinEnergyProblem p;
    p.s = s;
    auto point = [&] {
        return Eigen::RowVector3d(rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0),
                                  rng.uniform(0.0, 10.0));
    };
    p.spec.d0 = Eigen::MatrixXd::Zero(s, 3);
    p.spec.dM = Eigen::MatrixXd::Zero(s, 3);
    p.spec.d0.row(0) = point();
    p.spec.waypoints.resize(pieces - 1, 3);
    for (int i = 0; i + 1 < pieces; ++i)
        p.spec.waypoints.row(i) = point();
    p.spec.dM.row(0) = point();
    Eigen::VectorXd t(pieces);
    for (int i = 0; i < pieces; ++i)
        t[i] = rng.uniform(0.5, 2.0);
    p.times = PieceTimes(std::move(t));
    return p;
}

std::uint64_t instance_seed(std::uint64_t seed, int s, int pieces, int trial)
{
    SplitMix64 mix(seed);
    std::uint64_t h = mix.next();
    for (std::uint64_t v : {std::uint64_t(s), std::uint64_t(pieces), std::uint64_t(trial)}) {
        SplitMix64 step(h ^ (v * 0x9e3779b97f4a7c15ULL));
        h = step.next();
    }
    return h;
}

std::vector<BenchRow> run_bench(const BenchSpec &spec)
{
    spec.validate();
    std::vector<BenchRow> rows;
    for (int s : spec.s_values)
        for (int m : spec.piece_counts)
            for (int k = 0; k < spec.trials; ++k)
                rows.push_back({s, m, k, 0, 0.0, 0.0});

    auto runOne = [&](BenchRow &row) {
        SplitMix64 rng(instance_seed(spec.seed, row.s, row.pieces, row.trial));
        const MinEnergyProblem p = random_instance(row.s, row.pieces, rng);
        const auto t0 = std::chrono::steady_clock::now();
        const MinEnergySolution sol = solve_min_energy(p);
        const auto t1 = std::chrono::steady_clock::now();
        row.nanos = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
        row.nanos_per_piece = static_cast<double>(row.nanos) / row.pieces;
        row.energy = sol.energy;
    };

    const int threads = std::max(1, spec.threads);
    if (threads == 1) {
        for (auto &row : rows)
            runOne(row);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < rows.size(); i = next++)
                runOne(rows[i]);
        });
    for (auto &th : pool)
        th.join();
    return rows;
}

void write_bench_csv(std::ostream &os, const std::vector<BenchRow> &rows)
{
    os << "s,M,trial,nanos,nanos_per_piece\n";
    for (const auto &r : rows)
        os << r.s << ',' << r.pieces << ',' << r.trial << ',' << r.nanos << ','
           << r.nanos_per_piece << '\n';
}

} // namespace lstraj
