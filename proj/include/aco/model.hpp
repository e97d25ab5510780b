#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "aco/errors.hpp"
#include "aco/matrix.hpp"
#include "aco/rng.hpp"
#include "aco/thread_pool.hpp"
#include "aco/tsplib.hpp"

namespace aco {

/// Distance and heuristic matrices for one instance. Immutable after
/// build_problem; shared read-only by all workers.
struct ProblemInstance {
    int n = 0;
    Matrix<std::int32_t> dist;  // symmetric, zero diagonal
    Matrix<double> heuristic;   // 1/d off-diagonal, 0 on the diagonal
};

struct Parameters {
    double alpha = 1.0;
    double beta = 2.0;
    double rho = 0.5;
    int m = 0;          // ant count; 0 means "use n"
    int nn = 30;        // neighbour list length
    int iterations = 100;
    std::uint64_t seed = 1;
    int tile_size = 64; // theta

    void validate(int n, bool nn_strategy_selected) const {
        if (!(rho > 0.0 && rho <= 1.0))
            throw Error(Errc::config_error, "rho must be in (0,1]");
        if (alpha < 0.0 || beta < 0.0)
            throw Error(Errc::config_error, "alpha and beta must be >= 0");
        if (m < 0)
            throw Error(Errc::config_error, "ant count must be >= 1");
        if (iterations < 1)
            throw Error(Errc::config_error, "iterations must be >= 1");
        if (tile_size < 1)
            throw Error(Errc::config_error, "tile size must be >= 1");
        if (nn_strategy_selected && !(nn >= 1 && nn < n))
            throw Error(Errc::config_error,
                        "nn must satisfy 1 <= nn < n (n=" + std::to_string(n) + ")");
    }
};

struct PheromoneMatrix {
    Matrix<double> tau;

    PheromoneMatrix() = default;
    PheromoneMatrix(int n, double value)
        : tau(static_cast<std::size_t>(n), static_cast<std::size_t>(n), value) {}

    int n() const noexcept { return static_cast<int>(tau.rows()); }
    double& at(int i, int j) { return tau(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
    double at(int i, int j) const { return tau(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
};

/// Precomputed tau^alpha * eta^beta, recomputed once per iteration and then
/// shared read-only by every ant (diagonal pinned to zero).
struct ChoiceInfo {
    Matrix<double> value;

    int n() const noexcept { return static_cast<int>(value.rows()); }
    double at(int i, int j) const { return value(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
    std::span<const double> row(int i) const { return value.row(static_cast<std::size_t>(i)); }
};

struct NearestNeighborLists {
    int nn = 0;
    Matrix<std::int32_t> lists; // n rows of nn city indices, ascending distance

    std::span<const std::int32_t> row(int city) const {
        return lists.row(static_cast<std::size_t>(city));
    }
};

/// Packed visited-city bitset (the ant's memory M).
class TabuBitset {
public:
    TabuBitset() = default;
    explicit TabuBitset(int n)
        : n_(n), words_(static_cast<std::size_t>((n + 63) / 64), 0) {}

    int size() const noexcept { return n_; }

    void set(int city) noexcept {
        words_[static_cast<std::size_t>(city >> 6)] |= std::uint64_t{1} << (city & 63);
    }
    bool test(int city) const noexcept {
        return (words_[static_cast<std::size_t>(city >> 6)] >> (city & 63)) & 1u;
    }
    void reset() noexcept { std::fill(words_.begin(), words_.end(), 0); }

    int count() const noexcept {
        int total = 0;
        for (auto w : words_) total += std::popcount(w);
        return total;
    }
    bool all_set() const noexcept { return count() == n_; }

private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

struct AntState {
    TabuBitset tabu;
    std::vector<std::int32_t> tour; // closed: tour[n] == tour[0] once complete
    std::int64_t length = 0;
    RngStream rng;

    explicit AntState(int n) : tabu(n) { tour.reserve(static_cast<std::size_t>(n) + 1); }
};

inline ProblemInstance build_problem(const InstanceSpec& spec) {
    const int n = spec.dimension;
    ProblemInstance p;
    p.n = n;
    p.dist = Matrix<std::int32_t>(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 0);
    p.heuristic = Matrix<double>(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 0.0);

    std::int64_t max_d = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const std::int32_t d = edge_weight(spec, i, j);
            if (d < 0)
                throw Error(Errc::overflow, "negative distance computed");
            p.dist(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = d;
            p.dist(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = d;
            // d == 0 between distinct cities only happens for degenerate
            // coordinates; weight it like distance 1 instead of dividing by 0.
            const double eta = d > 0 ? 1.0 / d : 1.0;
            p.heuristic(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = eta;
            p.heuristic(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = eta;
            max_d = std::max<std::int64_t>(max_d, d);
        }
    }
    if (max_d > 0 &&
        static_cast<std::int64_t>(n) > std::numeric_limits<std::int64_t>::max() / max_d)
        throw Error(Errc::overflow, "tour lengths would overflow 64-bit range");
    return p;
}

inline ChoiceInfo compute_choice_info(const PheromoneMatrix& tau,
                                      const ProblemInstance& problem, double alpha,
                                      double beta, ThreadPool* pool = nullptr) {
    const int n = problem.n;
    ChoiceInfo choice;
    choice.value =
        Matrix<double>(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 0.0);
    parallel_rows(pool, n, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            const double* tau_row = tau.tau.data() + i * n;
            const double* eta_row = problem.heuristic.data() + i * n;
            double* out = choice.value.data() + i * n;
            for (int j = 0; j < n; ++j) {
                out[j] = std::pow(tau_row[j], alpha) * std::pow(eta_row[j], beta);
            }
            out[i] = 0.0;
        }
    });
    return choice;
}

/// nn nearest distinct cities per row, ascending distance, ties broken by
/// lower city index so lists are reproducible.
inline NearestNeighborLists build_nn_lists(const ProblemInstance& problem, int nn) {
    const int n = problem.n;
    if (!(nn >= 1 && nn < n))
        throw Error(Errc::invalid_length,
                    "nn list length must satisfy 1 <= nn < n");
    NearestNeighborLists out;
    out.nn = nn;
    out.lists = Matrix<std::int32_t>(static_cast<std::size_t>(n),
                                     static_cast<std::size_t>(nn), 0);
    std::vector<std::int32_t> order(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i) {
        int k = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) order[static_cast<std::size_t>(k++)] = j;
        auto row = problem.dist.row(static_cast<std::size_t>(i));
        std::partial_sort(order.begin(), order.begin() + nn, order.end(),
                          [&](std::int32_t a, std::int32_t b) {
                              if (row[static_cast<std::size_t>(a)] != row[static_cast<std::size_t>(b)])
                                  return row[static_cast<std::size_t>(a)] < row[static_cast<std::size_t>(b)];
                              return a < b;
                          });
        std::copy(order.begin(), order.begin() + nn,
                  out.lists.row(static_cast<std::size_t>(i)).begin());
    }
    return out;
}

/// Exact closed-tour length; validates the permutation and closure.
inline std::int64_t tour_length(const ProblemInstance& problem,
                                std::span<const std::int32_t> tour) {
    const int n = problem.n;
    if (tour.size() != static_cast<std::size_t>(n) + 1)
        throw Error(Errc::not_closed,
                    "closed tour must have n+1 entries, got " + std::to_string(tour.size()));
    if (tour.front() != tour.back())
        throw Error(Errc::not_closed, "tour does not return to its start");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (std::size_t k = 0; k + 1 < tour.size(); ++k) {
        const std::int32_t c = tour[k];
        if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)])
            throw Error(Errc::not_a_permutation,
                        "tour is not a permutation of 0.." + std::to_string(n - 1));
        seen[static_cast<std::size_t>(c)] = true;
    }
    std::int64_t total = 0;
    for (std::size_t k = 0; k + 1 < tour.size(); ++k)
        total += problem.dist(static_cast<std::size_t>(tour[k]),
                              static_cast<std::size_t>(tour[k + 1]));
    return total;
}

/// Length of the deterministic greedy nearest-neighbour tour from city 0
/// (ties to the lower index). Used to seed the pheromone level.
inline std::int64_t greedy_nn_tour_length(const ProblemInstance& problem) {
    const int n = problem.n;
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    int current = 0;
    visited[0] = true;
    std::int64_t total = 0;
    for (int step = 1; step < n; ++step) {
        int best = -1;
        std::int32_t best_d = std::numeric_limits<std::int32_t>::max();
        for (int j = 0; j < n; ++j) {
            if (visited[static_cast<std::size_t>(j)]) continue;
            const std::int32_t d = problem.dist(static_cast<std::size_t>(current),
                                                static_cast<std::size_t>(j));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        total += best_d;
        visited[static_cast<std::size_t>(best)] = true;
        current = best;
    }
    total += problem.dist(static_cast<std::size_t>(current), 0);
    return total;
}

/// Uniform initial trail m / C_greedy on every entry (diagonal included; it
/// is never read because the choice diagonal is pinned to zero).
inline PheromoneMatrix initial_pheromone(const ProblemInstance& problem, int m) {
    const double tau0 =
        static_cast<double>(m) / static_cast<double>(greedy_nn_tour_length(problem));
    return PheromoneMatrix(problem.n, tau0);
}

} // namespace aco
