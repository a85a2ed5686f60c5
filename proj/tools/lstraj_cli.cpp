// lstraj: minimum-energy spline generation, benchmarking and corridor planning.

#include "lstraj/bench.hpp"
#include "lstraj/corridor_opt.hpp"
#include "lstraj/errors.hpp"
#include "lstraj/io.hpp"
#include "lstraj/min_energy.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitFormat = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

void write_samples(const std::string &path, const lstraj::Trajectory &traj, double rate)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    lstraj::write_samples_csv(out, traj, rate);
}

int cmd_solve(const std::string &input, const std::string &output, const std::string &samples,
              double rate)
{
    const lstraj::MinEnergyProblem problem = lstraj::problem_from_json(lstraj::read_file(input));
    const lstraj::MinEnergySolution sol = lstraj::solve_min_energy(problem);
    const std::string json = lstraj::trajectory_to_json(sol.trajectory);
    if (output.empty() || output == "-")
        std::cout << json << '\n';
    else
        lstraj::write_file(output, json);
    if (!samples.empty())
        write_samples(samples, sol.trajectory, rate);
    std::cerr << "energy=" << sol.energy << " pieces=" << problem.pieceCount() << '\n';
    return 0;
}

int cmd_bench(const lstraj::BenchSpec &spec, const std::string &output)
{
    const auto rows = lstraj::run_bench(spec);
    if (output.empty() || output == "-") {
        lstraj::write_bench_csv(std::cout, rows);
    } else {
        std::ofstream out(output);
        if (!out)
            throw std::runtime_error("cannot write " + output);
        lstraj::write_bench_csv(out, rows);
    }
    return 0;
}

struct CorridorArgs {
    std::string input;
    std::string output = "trajectory.json";
    std::string samples;
    std::string history;
    double rate = 100.0;
    int s = 3;
    double timeout = 1.5;
    int rounds = 5;
    lstraj::CorridorWeights weights;
};

int cmd_corridor(const CorridorArgs &args)
{
    const auto started = std::chrono::steady_clock::now();
    lstraj::FlightCorridor corridor = lstraj::corridor_from_json(lstraj::read_file(args.input));
    lstraj::CorridorProblem problem =
        lstraj::make_corridor_problem(std::move(corridor), args.weights, args.s);
    lstraj::PlanOptions opts;
    opts.timeout = std::chrono::duration<double>(args.timeout);
    opts.started = started;
    opts.max_refine_rounds = args.rounds;
    const lstraj::PlanResult res = lstraj::plan(std::move(problem), {}, opts);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    lstraj::write_file(args.output, lstraj::trajectory_to_json(res.trajectory));
    if (!args.samples.empty())
        write_samples(args.samples, res.trajectory, args.rate);
    if (!args.history.empty()) {
        std::ofstream out(args.history);
        if (!out)
            throw std::runtime_error("cannot write " + args.history);
        out << "round,iteration,cost\n";
        out.precision(17);
        for (std::size_t r = 0; r < res.round_starts.size(); ++r) {
            const std::size_t begin = res.round_starts[r];
            const std::size_t end = r + 1 < res.round_starts.size() ? res.round_starts[r + 1]
                                                                     : res.cost_history.size();
            for (std::size_t k = begin; k < end; ++k)
                out << r << ',' << (k - begin) << ',' << res.cost_history[k] << '\n';
        }
    }
    std::cout << "final_cost=" << res.final_cost << " wall_time=" << wall
              << " refine_rounds=" << res.refine_rounds << " pieces=" << res.problem.pieceCount()
              << " feasible=" << (res.feasible ? 1 : 0) << " timed_out=" << (res.timed_out ? 1 : 0)
              << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Minimum-jerk/snap spline generation and corridor trajectory optimization"};
    app.require_subcommand(1);

    std::string solveInput, solveOutput, solveSamples;
    double solveRate = 100.0;
    auto *solve = app.add_subcommand("solve", "Solve a waypoint problem given as JSON");
    solve->add_option("input", solveInput, "Problem JSON")->required();
    solve->add_option("--output,-o", solveOutput, "Trajectory JSON (stdout if omitted)");
    solve->add_option("--samples", solveSamples, "Optional CSV of sampled states");
    solve->add_option("--rate", solveRate, "Samples per second")->check(CLI::PositiveNumber);

    lstraj::BenchSpec bench;
    std::string benchOutput;
    auto *benchCmd = app.add_subcommand("bench", "Time random minimum-energy instances");
    benchCmd->add_option("--s", bench.s_values, "Penalized orders")->delimiter(',');
    benchCmd->add_option("--pieces", bench.piece_counts, "Piece counts, ascending")
        ->delimiter(',');
    benchCmd->add_option("--trials", bench.trials, "Instances per (s, M)");
    benchCmd->add_option("--seed", bench.seed, "RNG seed");
    benchCmd->add_option("--parallel", bench.threads, "Worker threads");
    benchCmd->add_option("--output,-o", benchOutput, "CSV path (stdout if omitted)");

    CorridorArgs cargs;
    auto *corr = app.add_subcommand("corridor", "Optimize a trajectory inside a flight corridor");
    corr->add_option("input", cargs.input, "Corridor JSON")->required();
    corr->add_option("--output,-o", cargs.output, "Trajectory JSON");
    corr->add_option("--samples", cargs.samples, "Optional CSV of sampled states");
    corr->add_option("--history", cargs.history, "Optional cost-history CSV");
    corr->add_option("--rate", cargs.rate, "Samples per second")->check(CLI::PositiveNumber);
    corr->add_option("--s", cargs.s, "Penalized order");
    corr->add_option("--timeout", cargs.timeout, "Wall-clock budget in seconds");
    corr->add_option("--rounds", cargs.rounds, "Maximum refinement rounds");
    corr->add_option("--kappa", cargs.weights.kappa, "Barrier coefficient");
    corr->add_option("--rho-t", cargs.weights.rho_t, "Time weight");
    corr->add_option("--rho-v", cargs.weights.rho_v, "Velocity penalty weight");
    corr->add_option("--rho-a", cargs.weights.rho_a, "Acceleration penalty weight");
    corr->add_option("--v-max", cargs.weights.v_max, "Velocity limit");
    corr->add_option("--a-max", cargs.weights.a_max, "Acceleration limit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve)
            return cmd_solve(solveInput, solveOutput, solveSamples, solveRate);
        if (*benchCmd)
            return cmd_bench(bench, benchOutput);
        if (*corr)
            return cmd_corridor(cargs);
    } catch (const lstraj::FormatError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const lstraj::CorridorError &e) {
        std::cerr << "error: " << e.what() << " (polyhedra " << e.first() << ", " << e.second()
                  << ")\n";
        return kExitInfeasible;
    } catch (const lstraj::InvalidArgument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const lstraj::SingularMatrixError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
