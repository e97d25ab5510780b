// Benchmark and verification harness for the Ant System strategy library.
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "aco/engine.hpp"
#include "aco/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerify = 3;

aco::Selection parse_selection(const std::string& name) {
    if (name == "roulette") return aco::Selection::roulette_full;
    if (name == "nn") return aco::Selection::roulette_nn;
    if (name == "data-parallel") return aco::Selection::data_parallel_tiled;
    throw aco::Error(aco::Errc::config_error,
                     "unknown selection '" + name +
                         "' (expected roulette, nn, or data-parallel)");
}

aco::Deposit parse_deposit(const std::string& name) {
    if (name == "accumulate") return aco::Deposit::accumulate;
    if (name == "scatter-gather") return aco::Deposit::scatter_gather;
    if (name == "scatter-gather-tiled") return aco::Deposit::scatter_gather_tiled;
    if (name == "symmetric-reduction") return aco::Deposit::symmetric_reduction;
    throw aco::Error(aco::Errc::config_error,
                     "unknown deposit '" + name +
                         "' (expected accumulate, scatter-gather, "
                         "scatter-gather-tiled, or symmetric-reduction)");
}

int exit_code_for(const aco::Error& e) {
    switch (e.code()) {
    case aco::Errc::io_error:
    case aco::Errc::missing_field:
    case aco::Errc::unsupported_edge_weight_type:
    case aco::Errc::malformed_coord:
    case aco::Errc::dimension_mismatch:
        return kExitIo;
    default:
        return kExitConfig;
    }
}

struct CommonFlags {
    std::string selection = "nn";
    std::string deposit = "accumulate";
    int theta = 64;
    double alpha = 1.0;
    double beta = 2.0;
    double rho = 0.5;
    int ants = 0; // 0 = one per city
    int nn = 30;
    int iters = 100;
    std::uint64_t seed = 1;
    int workers = 0; // 0 = available parallelism
    bool random_start = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--selection", flags.selection,
                    "tour construction strategy: roulette | nn | data-parallel");
    cmd->add_option("--theta", flags.theta, "tile size for the tiled strategies");
    cmd->add_option("--alpha", flags.alpha, "pheromone influence");
    cmd->add_option("--beta", flags.beta, "heuristic influence");
    cmd->add_option("--rho", flags.rho, "evaporation rate in (0,1]");
    cmd->add_option("--ants", flags.ants, "ant count (default: number of cities)");
    cmd->add_option("--nn", flags.nn, "neighbour list length for the nn strategy");
    cmd->add_option("--iters", flags.iters, "iterations per run");
    cmd->add_option("--seed", flags.seed, "base RNG seed");
    cmd->add_option("--workers", flags.workers,
                    "worker threads (default: available parallelism)");
    cmd->add_flag("--random-start", flags.random_start,
                  "place ants at seeded-random start cities instead of k mod n");
}

aco::RunConfig make_config(const CommonFlags& flags, const std::string& instance,
                           const std::string& deposit_name) {
    aco::RunConfig config;
    config.params.alpha = flags.alpha;
    config.params.beta = flags.beta;
    config.params.rho = flags.rho;
    config.params.m = flags.ants;
    config.params.nn = flags.nn;
    config.params.iterations = flags.iters;
    config.params.seed = flags.seed;
    config.params.tile_size = flags.theta;
    config.selection.variant = parse_selection(flags.selection);
    config.selection.tile_size = flags.theta;
    config.deposit.variant = parse_deposit(deposit_name);
    config.deposit.tile_size = flags.theta;
    config.workers = flags.workers;
    config.random_start = flags.random_start;
    config.instance_path = instance;
    return config;
}

int cmd_solve(const CommonFlags& flags, const std::string& instance,
              const std::string& out_path) {
    const aco::RunConfig config = make_config(flags, instance, flags.deposit);
    const aco::RunReport report = aco::run(config);

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out)
            throw aco::Error(aco::Errc::io_error, "cannot write report: " + out_path);
        out << aco::report_to_json(report).dump(2) << '\n';
    }

    double construct_ms = 0.0, update_ms = 0.0;
    for (const auto& rec : report.per_iteration) {
        construct_ms += rec.construct_ms;
        update_ms += rec.update_ms;
    }
    const double iters = static_cast<double>(report.per_iteration.size());
    std::cout << "instance " << report.instance_name << " (n=" << report.n
              << ", m=" << report.m << ")\n"
              << "best length " << report.best_length << '\n'
              << "mean construct " << aco::format_double(construct_ms / iters)
              << " ms/iter, mean update " << aco::format_double(update_ms / iters)
              << " ms/iter over " << report.per_iteration.size() << " iterations\n";
    if (!out_path.empty()) std::cout << "report written to " << out_path << '\n';
    return kExitOk;
}

int cmd_bench(const CommonFlags& flags, const std::vector<std::string>& instances,
              const std::vector<std::string>& selections,
              const std::vector<std::string>& deposits, const std::vector<int>& thetas,
              int reps, const std::string& out_path) {
    if (instances.empty())
        throw aco::Error(aco::Errc::config_error, "--instance is required");
    if (reps < 1)
        throw aco::Error(aco::Errc::config_error, "--reps must be >= 1");
    for (const auto& s : selections) parse_selection(s);
    for (const auto& d : deposits) parse_deposit(d);

    std::ofstream csv(out_path);
    if (!csv)
        throw aco::Error(aco::Errc::io_error, "cannot write CSV: " + out_path);
    csv << aco::bench_csv_header() << '\n';

    struct Aggregate {
        double construct_ms = 0.0;
        double update_ms = 0.0;
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        std::int64_t rows = 0;
    };
    std::vector<std::pair<std::string, Aggregate>> table;

    for (const auto& instance : instances) {
        for (const auto& selection : selections) {
            for (const auto& deposit : deposits) {
                for (const int theta : thetas) {
                    Aggregate agg;
                    for (int rep = 0; rep < reps; ++rep) {
                        CommonFlags cell = flags;
                        cell.selection = selection;
                        cell.theta = theta;
                        cell.seed = flags.seed + static_cast<std::uint64_t>(rep);
                        aco::RunConfig config = make_config(cell, instance, deposit);
                        const aco::RunReport report = aco::run(config);
                        for (const auto& rec : report.per_iteration) {
                            aco::write_bench_csv_row(csv, report.instance_name, report.n,
                                                     config.selection.variant,
                                                     config.deposit.variant, theta, rep,
                                                     rec);
                            agg.construct_ms += rec.construct_ms;
                            agg.update_ms += rec.update_ms;
                            ++agg.rows;
                        }
                        agg.best = std::min(agg.best, report.best_length);
                    }
                    std::ostringstream key;
                    key << instance << ' ' << selection << ' ' << deposit << " theta="
                        << theta;
                    table.emplace_back(key.str(), agg);
                }
            }
        }
    }

    std::cout << std::left << std::setw(64) << "cell" << std::right << std::setw(16)
              << "construct ms" << std::setw(14) << "update ms" << std::setw(12)
              << "best len" << '\n';
    for (const auto& [key, agg] : table) {
        const double rows = static_cast<double>(agg.rows);
        std::cout << std::left << std::setw(64) << key << std::right << std::setw(16)
                  << std::fixed << std::setprecision(3) << agg.construct_ms / rows
                  << std::setw(14) << agg.update_ms / rows << std::setw(12) << agg.best
                  << '\n';
    }
    std::cout << "CSV written to " << out_path << '\n';
    return kExitOk;
}

int cmd_verify(const CommonFlags& flags, const std::string& instance) {
    const aco::RunConfig config = make_config(flags, instance, flags.deposit);
    const aco::InstanceSpec spec = aco::load_instance(instance);
    const aco::ProblemInstance problem = aco::build_problem(spec);
    const aco::VerifyReport report = aco::verify_deposit_equivalence(problem, config);

    for (const auto& entry : report.strategies) {
        std::cout << (entry.ledger_ok ? "PASS" : "FAIL") << " ledger "
                  << aco::deposit_name(entry.variant) << ": measured global_loads="
                  << aco::format_double(entry.measured.global_loads)
                  << " predicted=" << aco::format_double(entry.predicted.global_loads)
                  << " atomic_ops=" << aco::format_double(entry.measured.atomic_ops)
                  << '\n';
    }
    for (const auto& pair : report.pairs) {
        std::cout << (pair.pass ? "PASS" : "FAIL") << ' ' << aco::deposit_name(pair.a)
                  << " vs " << aco::deposit_name(pair.b)
                  << ": max |diff| = " << aco::format_double(pair.diff.max_abs_diff)
                  << " at (" << pair.diff.i << ',' << pair.diff.j << ")\n";
    }
    if (!report.all_pass) {
        std::cerr << "verification failed\n";
        return kExitVerify;
    }
    std::cout << "all strategy pairs agree within 1e-9\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ant System TSP solver with interchangeable construction and "
                 "pheromone-update strategies"};
    app.require_subcommand(1);

    CommonFlags solve_flags, bench_flags, verify_flags;
    std::string solve_instance, solve_out;
    std::vector<std::string> bench_instances;
    std::vector<std::string> bench_selections{"nn"};
    std::vector<std::string> bench_deposits{"accumulate"};
    std::vector<int> bench_thetas{64};
    int bench_reps = 1;
    std::string bench_out = "bench.csv";
    std::string verify_instance;

    CLI::App* solve = app.add_subcommand("solve", "run one instance and report the best tour");
    solve->add_option("--instance", solve_instance, "TSPLIB instance file")->required();
    solve->add_option("--deposit", solve_flags.deposit,
                      "pheromone update strategy: accumulate | scatter-gather | "
                      "scatter-gather-tiled | symmetric-reduction");
    solve->add_option("--out", solve_out, "write the JSON run report here");
    add_common_flags(solve, solve_flags);

    CLI::App* bench = app.add_subcommand(
        "bench", "run a strategy grid over instances and emit CSV");
    bench->add_option("--instance", bench_instances, "TSPLIB instance file (repeatable)")
        ->required();
    bench->add_option("--selections", bench_selections,
                      "construction strategies to cross (repeatable)");
    bench->add_option("--deposits", bench_deposits,
                      "pheromone update strategies to cross (repeatable)");
    bench->add_option("--thetas", bench_thetas, "tile sizes to cross (repeatable)");
    bench->add_option("--reps", bench_reps, "repetitions per cell (seed = base + rep)");
    bench->add_option("--out", bench_out, "CSV output path");
    add_common_flags(bench, bench_flags);

    CLI::App* verify = app.add_subcommand(
        "verify", "check all deposit strategies agree cell-wise and match the "
                  "predicted access counts");
    verify->add_option("--instance", verify_instance, "TSPLIB instance file")->required();
    add_common_flags(verify, verify_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_flags, solve_instance, solve_out);
        if (bench->parsed())
            return cmd_bench(bench_flags, bench_instances, bench_selections,
                             bench_deposits, bench_thetas, bench_reps, bench_out);
        if (verify->parsed()) return cmd_verify(verify_flags, verify_instance);
    } catch (const aco::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
