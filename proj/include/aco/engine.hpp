#pragma once

#include <array>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "aco/construction.hpp"
#include "aco/errors.hpp"
#include "aco/model.hpp"
#include "aco/pheromone.hpp"
#include "aco/thread_pool.hpp"
#include "aco/tsplib.hpp"

namespace aco {

struct RunConfig {
    Parameters params;
    SelectionStrategy selection;
    DepositStrategy deposit;
    int workers = 0;            // 0 = available parallelism
    bool random_start = false;  // default: ant k starts at city k mod n
    std::string instance_path;
};

struct IterationRecord {
    int iteration = 0; // 1-based
    std::int64_t best_length = 0;
    double mean_length = 0.0;
    double construct_ms = 0.0;
    double update_ms = 0.0;
    AccessLedger deposit_ledger;
};

struct RunReport {
    std::string instance_name;
    int n = 0;
    int m = 0;
    std::uint64_t seed = 0;
    RunConfig config;
    std::vector<std::int32_t> best_tour;
    std::int64_t best_length = 0;
    std::vector<IterationRecord> per_iteration;
};

/// One Ant System run: construct m tours, evaporate, deposit, recompute
/// choice-info, track the best tour. Construction and the gather-style
/// updates fork across the worker pool; every value in the report is a pure
/// function of (config, seed) regardless of worker count.
class Engine {
public:
    Engine(ProblemInstance problem, RunConfig config)
        : problem_(std::move(problem)), config_(std::move(config)) {
        const int n = problem_.n;
        if (config_.params.m == 0) config_.params.m = n;
        config_.params.validate(n, config_.selection.variant == Selection::roulette_nn);
        if (config_.workers == 0) config_.workers = ThreadPool::hardware_workers();
        if (config_.workers < 1)
            throw Error(Errc::config_error, "workers must be >= 1");
        if (config_.selection.variant == Selection::data_parallel_tiled)
            config_.selection.tile_size = config_.params.tile_size;
        config_.deposit.tile_size = config_.params.tile_size;

        pool_ = std::make_unique<ThreadPool>(config_.workers);
        m_ = config_.params.m;
        tau_ = initial_pheromone(problem_, m_);
        if (config_.selection.variant == Selection::roulette_nn)
            nn_lists_ = build_nn_lists(problem_, config_.params.nn);
        choice_ = compute_choice_info(tau_, problem_, config_.params.alpha,
                                      config_.params.beta, pool_.get());
        ants_.assign(static_cast<std::size_t>(m_), AntState(n));
        best_length_ = std::numeric_limits<std::int64_t>::max();
    }

    const ProblemInstance& problem() const noexcept { return problem_; }
    const RunConfig& config() const noexcept { return config_; }
    const PheromoneMatrix& pheromone() const noexcept { return tau_; }
    const ChoiceInfo& choice() const noexcept { return choice_; }
    std::span<const AntState> ants() const noexcept { return ants_; }
    std::int64_t best_length() const noexcept { return best_length_; }
    const std::vector<std::int32_t>& best_tour() const noexcept { return best_tour_; }

    IterationRecord run_iteration() {
        const int n = problem_.n;
        IterationRecord record;
        record.iteration = iteration_ + 1;

        assert(phase_ == Phase::idle);
        set_phase(Phase::constructing);
        const auto t0 = Clock::now();
        const NearestNeighborLists* nn =
            config_.selection.variant == Selection::roulette_nn ? &nn_lists_ : nullptr;
        pool_->run_chunks(m_, [&](std::int64_t begin, std::int64_t end) {
            for (std::int64_t k = begin; k < end; ++k) {
                AntState& ant = ants_[static_cast<std::size_t>(k)];
                ant.rng = RngStream(config_.params.seed,
                                    static_cast<std::uint32_t>(iteration_),
                                    static_cast<std::uint32_t>(k));
                int start;
                if (config_.random_start) {
                    // Placement burns draw 0 of step 0; fixed placement uses none.
                    start = static_cast<int>(ant.rng.uniform_at(0, 0) * n);
                    if (start >= n) start = n - 1;
                } else {
                    start = static_cast<int>(k % n);
                }
                construct_tour(problem_, choice_, nn, config_.selection, ant, start);
            }
        });
        record.construct_ms = elapsed_ms(t0);

        std::int64_t iteration_best = std::numeric_limits<std::int64_t>::max();
        std::size_t iteration_best_ant = 0;
        std::int64_t total = 0;
        for (std::size_t k = 0; k < ants_.size(); ++k) {
            const std::int64_t len = ants_[k].length;
            total += len;
            if (len < iteration_best) {
                iteration_best = len;
                iteration_best_ant = k;
            }
        }
        record.best_length = iteration_best;
        record.mean_length = static_cast<double>(total) / static_cast<double>(m_);

        set_phase(Phase::updating);
        const auto t1 = Clock::now();
        AccessLedger evaporation_ledger;
        evaporate(tau_, config_.params.rho, evaporation_ledger, pool_.get());
        const TourBuffer tours =
            TourBuffer::from_ants(problem_, ants_, config_.deposit.tile_size);
        AccessLedger deposit_ledger;
        apply_deposit(config_.deposit, tau_, tours, deposit_ledger, pool_.get());
        record.update_ms = elapsed_ms(t1);
        record.deposit_ledger = deposit_ledger;

        const AccessLedger predicted = predicted_access_cost(
            config_.deposit, n, m_, config_.deposit.tile_size);
        if (!(deposit_ledger == predicted))
            throw std::logic_error("deposit ledger disagrees with predicted access cost");

        set_phase(Phase::idle);
        choice_ = compute_choice_info(tau_, problem_, config_.params.alpha,
                                      config_.params.beta, pool_.get());

        if (iteration_best < best_length_) {
            best_length_ = iteration_best;
            best_tour_ = ants_[iteration_best_ant].tour;
        }
        ++iteration_;
        return record;
    }

    RunReport run() {
        RunReport report;
        report.n = problem_.n;
        report.m = m_;
        report.seed = config_.params.seed;
        report.config = config_;
        report.per_iteration.reserve(static_cast<std::size_t>(config_.params.iterations));
        for (int it = 0; it < config_.params.iterations; ++it)
            report.per_iteration.push_back(run_iteration());
        report.best_length = best_length_;
        report.best_tour = best_tour_;
        return report;
    }

private:
    using Clock = std::chrono::steady_clock;

    enum class Phase { idle, constructing, updating };

    static double elapsed_ms(Clock::time_point since) {
        return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
    }

    void set_phase(Phase p) noexcept { phase_ = p; }

    ProblemInstance problem_;
    RunConfig config_;
    std::unique_ptr<ThreadPool> pool_;
    int m_ = 0;
    int iteration_ = 0;
    Phase phase_ = Phase::idle;
    PheromoneMatrix tau_;
    ChoiceInfo choice_;
    NearestNeighborLists nn_lists_;
    std::vector<AntState> ants_;
    std::int64_t best_length_ = 0;
    std::vector<std::int32_t> best_tour_;
};

inline RunReport run(const RunConfig& config) {
    const InstanceSpec spec = load_instance(config.instance_path);
    Engine engine(build_problem(spec), config);
    RunReport report = engine.run();
    report.instance_name = spec.name;
    return report;
}

/// Cross-checks all four deposit strategies from one set of constructed
/// tours: pairwise matrix agreement within `tolerance` and measured ledgers
/// against the closed-form predictions.
struct VerifyReport {
    struct StrategyResult {
        Deposit variant;
        AccessLedger measured;
        AccessLedger predicted;
        bool ledger_ok = false;
    };
    struct PairResult {
        Deposit a;
        Deposit b;
        MatrixDiff diff;
        bool pass = false;
    };
    std::array<StrategyResult, 4> strategies;
    std::vector<PairResult> pairs;
    bool all_pass = false;
};

inline VerifyReport verify_deposit_equivalence(const ProblemInstance& problem,
                                               RunConfig config,
                                               double tolerance = 1e-9) {
    const int m = config.params.m == 0 ? problem.n : config.params.m;
    config.params.m = m;
    config.params.validate(problem.n,
                           config.selection.variant == Selection::roulette_nn);
    const int theta = config.params.tile_size;

    // One construction pass; the resulting tours feed every strategy.
    const NearestNeighborLists* nn = nullptr;
    NearestNeighborLists nn_storage;
    if (config.selection.variant == Selection::roulette_nn) {
        nn_storage = build_nn_lists(problem, config.params.nn);
        nn = &nn_storage;
    }
    PheromoneMatrix base = initial_pheromone(problem, m);
    const ChoiceInfo choice = compute_choice_info(base, problem, config.params.alpha,
                                                  config.params.beta);
    SelectionStrategy selection = config.selection;
    selection.tile_size = config.params.tile_size;
    std::vector<AntState> ants(static_cast<std::size_t>(m), AntState(problem.n));
    for (int k = 0; k < m; ++k) {
        AntState& ant = ants[static_cast<std::size_t>(k)];
        ant.rng = RngStream(config.params.seed, 0, static_cast<std::uint32_t>(k));
        construct_tour(problem, choice, nn, selection, ant, k % problem.n);
    }
    const TourBuffer tours = TourBuffer::from_ants(problem, ants, theta);

    AccessLedger evaporation_ledger;
    evaporate(base, config.params.rho, evaporation_ledger);

    const std::array<Deposit, 4> variants = {
        Deposit::accumulate, Deposit::scatter_gather, Deposit::scatter_gather_tiled,
        Deposit::symmetric_reduction};

    VerifyReport report;
    std::array<PheromoneMatrix, 4> results;
    for (std::size_t v = 0; v < variants.size(); ++v) {
        results[v] = base;
        AccessLedger ledger;
        const DepositStrategy strategy{variants[v], theta};
        apply_deposit(strategy, results[v], tours, ledger);
        auto& entry = report.strategies[v];
        entry.variant = variants[v];
        entry.measured = ledger;
        entry.predicted = predicted_access_cost(strategy, problem.n, m, theta);
        entry.ledger_ok = entry.measured == entry.predicted;
    }

    report.all_pass = true;
    for (std::size_t a = 0; a < variants.size(); ++a) {
        for (std::size_t b = a + 1; b < variants.size(); ++b) {
            VerifyReport::PairResult pair;
            pair.a = variants[a];
            pair.b = variants[b];
            pair.diff = max_cell_difference(results[a], results[b]);
            pair.pass = pair.diff.max_abs_diff <= tolerance;
            report.all_pass = report.all_pass && pair.pass;
            report.pairs.push_back(pair);
        }
    }
    for (const auto& entry : report.strategies)
        report.all_pass = report.all_pass && entry.ledger_ok;
    return report;
}

} // namespace aco
