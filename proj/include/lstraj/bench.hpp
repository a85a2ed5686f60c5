#pragma once

#include "lstraj/min_energy.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace lstraj {

/// SplitMix64: small, seedable and bit-identical on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [lo, hi) from the top 53 bits.
    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

struct BenchSpec {
    std::vector<int> s_values{3, 4};
    std::vector<int> piece_counts{2, 4, 8, 16, 32, 64, 128};
    int trials = 100;
    std::uint64_t seed = 1;
    int threads = 1; ///< >1 shards trials across threads

    void validate() const;
};

struct BenchRow {
    int s = 0;
    int pieces = 0;
    int trial = 0;
    std::int64_t nanos = 0;
    double nanos_per_piece = 0.0;
    double energy = 0.0;
};

/// Rest-to-rest 3-D instance: waypoints uniform in a cube of side 10,
/// durations uniform in [0.5, 2], zero boundary derivatives beyond position.
MinEnergyProblem random_instance(int s, int pieces, SplitMix64 &rng);

/// Seed for one (s, M, trial) cell so results do not depend on sharding.
std::uint64_t instance_seed(std::uint64_t seed, int s, int pieces, int trial);

/// Times solve_min_energy on generated instances; generation is not timed.
std::vector<BenchRow> run_bench(const BenchSpec &spec);

void write_bench_csv(std::ostream &os, const std::vector<BenchRow> &rows);

} // namespace lstraj
