#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "aco/errors.hpp"
#include "aco/model.hpp"
#include "aco/rng.hpp"

namespace aco {

enum class Selection { roulette_full, roulette_nn, data_parallel_tiled };

inline const char* selection_name(Selection s) noexcept {
    switch (s) {
    case Selection::roulette_full: return "roulette";
    case Selection::roulette_nn: return "nn";
    case Selection::data_parallel_tiled: return "data-parallel";
    }
    return "?";
}

struct SelectionStrategy {
    Selection variant = Selection::roulette_nn;
    int tile_size = 64; // theta, used by data_parallel_tiled
};

namespace detail {

inline int lowest_unvisited(const TabuBitset& tabu, int n) {
    for (int j = 0; j < n; ++j)
        if (!tabu.test(j)) return j;
    throw Error(Errc::all_visited, "no unvisited city remains");
}

} // namespace detail

/// Random proportional rule over all unvisited cities: one uniform draw,
/// then a prefix-sum walk in ascending city index order. A zero total weight
/// falls back to the lowest-index unvisited city.
inline int select_next_roulette(const ChoiceInfo& choice, int current,
                                const TabuBitset& tabu, RngStream& stream) {
    const int n = choice.n();
    const auto weights = choice.row(current);

    double total = 0.0;
    for (int j = 0; j < n; ++j)
        if (!tabu.test(j)) total += weights[static_cast<std::size_t>(j)];

    const double u = stream.next_uniform();
    if (total <= 0.0) return detail::lowest_unvisited(tabu, n);

    const double target = u * total;
    double acc = 0.0;
    int last_positive = -1;
    for (int j = 0; j < n; ++j) {
        if (tabu.test(j)) continue;
        const double w = weights[static_cast<std::size_t>(j)];
        if (w > 0.0) last_positive = j;
        acc += w;
        if (acc > target) return j;
    }
    // Rounding can leave the walk a hair short of `total`; the draw then
    // belongs to the last city with any weight.
    if (last_positive >= 0) return last_positive;
    return detail::lowest_unvisited(tabu, n);
}

/// Roulette restricted to the unvisited members of the current city's
/// neighbour list; when the whole list is visited, falls back to the argmax
/// of choice-info over all unvisited cities (ties to the lower index).
inline int select_next_nn(const ChoiceInfo& choice, const NearestNeighborLists& nn_lists,
                          int current, const TabuBitset& tabu, RngStream& stream) {
    const auto weights = choice.row(current);
    const auto neighbors = nn_lists.row(current);

    double total = 0.0;
    bool any_unvisited = false;
    for (const std::int32_t j : neighbors) {
        if (!tabu.test(j)) {
            any_unvisited = true;
            total += weights[static_cast<std::size_t>(j)];
        }
    }

    if (any_unvisited) {
        const double u = stream.next_uniform();
        if (total <= 0.0) {
            for (const std::int32_t j : neighbors)
                if (!tabu.test(j)) return j;
        }
        const double target = u * total;
        double acc = 0.0;
        int last_positive = -1;
        for (const std::int32_t j : neighbors) {
            if (tabu.test(j)) continue;
            const double w = weights[static_cast<std::size_t>(j)];
            if (w > 0.0) last_positive = j;
            acc += w;
            if (acc > target) return j;
        }
        if (last_positive >= 0) return last_positive;
        for (const std::int32_t j : neighbors)
            if (!tabu.test(j)) return j;
    }

    const int n = choice.n();
    int best = -1;
    double best_w = -1.0;
    for (int j = 0; j < n; ++j) {
        if (tabu.test(j)) continue;
        const double w = weights[static_cast<std::size_t>(j)];
        if (w > best_w) {
            best_w = w;
            best = j;
        }
    }
    if (best < 0) throw Error(Errc::all_visited, "no unvisited city remains");
    return best;
}

/// Tiled multiply-and-reduce selection: every city j gets its own uniform
/// draw u_j and the score weight * u_j * (unvisited ? 1 : 0); each tile of
/// theta cities reduces to a partial winner and the best partial winner is
/// returned. Draws are consumed for every city, visited or not, in ascending
/// index order, so the draw schedule is independent of both the tabu state
/// and theta.
inline int select_next_data_parallel(const ChoiceInfo& choice, int current,
                                     const TabuBitset& tabu, RngStream& stream,
                                     int theta) {
    if (theta < 1)
        throw Error(Errc::config_error, "tile size must be >= 1");
    const int n = choice.n();
    const auto weights = choice.row(current);

    int best_city = -1;
    double best_score = 0.0;
    for (int tile_start = 0; tile_start < n; tile_start += theta) {
        const int tile_end = std::min(tile_start + theta, n);
        int tile_city = -1;
        double tile_score = 0.0;
        for (int j = tile_start; j < tile_end; ++j) {
            const double u = stream.next_uniform();
            if (tabu.test(j)) continue;
            const double score = weights[static_cast<std::size_t>(j)] * u;
            if (tile_city < 0 || score > tile_score) {
                tile_score = score;
                tile_city = j;
            }
        }
        if (tile_city >= 0 && (best_city < 0 || tile_score > best_score)) {
            best_score = tile_score;
            best_city = tile_city;
        }
    }
    if (best_city < 0) throw Error(Errc::all_visited, "no unvisited city remains");
    // All-zero scores mean every unvisited weight was zero; fall back the
    // same way the roulette does.
    if (best_score <= 0.0) return detail::lowest_unvisited(tabu, n);
    return best_city;
}

inline int select_next(const ChoiceInfo& choice, const NearestNeighborLists* nn_lists,
                       const SelectionStrategy& strategy, int current,
                       const TabuBitset& tabu, RngStream& stream) {
    switch (strategy.variant) {
    case Selection::roulette_full:
        return select_next_roulette(choice, current, tabu, stream);
    case Selection::roulette_nn:
        return select_next_nn(choice, *nn_lists, current, tabu, stream);
    case Selection::data_parallel_tiled:
        return select_next_data_parallel(choice, current, tabu, stream,
                                         strategy.tile_size);
    }
    throw Error(Errc::config_error, "unknown selection strategy");
}

/// Builds one ant's closed tour. Step k positions the rng stream at step k,
/// so every selection starts from draw 0 of its own step.
inline void construct_tour(const ProblemInstance& problem, const ChoiceInfo& choice,
                           const NearestNeighborLists* nn_lists,
                           const SelectionStrategy& strategy, AntState& ant, int start) {
    const int n = problem.n;
    ant.tour.clear();
    ant.tabu.reset();
    ant.tour.push_back(start);
    ant.tabu.set(start);

    int current = start;
    for (int step = 1; step < n; ++step) {
        ant.rng.set_step(static_cast<std::uint32_t>(step));
        const int next = select_next(choice, nn_lists, strategy, current, ant.tabu,
                                     ant.rng);
        ant.tour.push_back(next);
        ant.tabu.set(next);
        current = next;
    }
    ant.tour.push_back(start);
    ant.length = tour_length(problem, ant.tour);
}

} // namespace aco
