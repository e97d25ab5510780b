#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aco/errors.hpp"
#include "aco/model.hpp"
#include "aco/thread_pool.hpp"

namespace aco {

enum class Deposit { accumulate, scatter_gather, scatter_gather_tiled, symmetric_reduction };

inline const char* deposit_name(Deposit d) noexcept {
    switch (d) {
    case Deposit::accumulate: return "accumulate";
    case Deposit::scatter_gather: return "scatter-gather";
    case Deposit::scatter_gather_tiled: return "scatter-gather-tiled";
    case Deposit::symmetric_reduction: return "symmetric-reduction";
    }
    return "?";
}

struct DepositStrategy {
    Deposit variant = Deposit::accumulate;
    int tile_size = 64; // theta, used by the tiled variants
};

/// Abstract memory-traffic counters for one kernel. Counters are reals:
/// cooperative tile loading attributes 1/theta of each logical access to
/// global memory, and those shares are summed exactly by scaling an integer
/// event count once (so e.g. 2*10^4/64 = 312.5 is represented exactly).
struct AccessLedger {
    double global_loads = 0.0;
    double global_stores = 0.0;
    double shared_loads = 0.0;
    double atomic_ops = 0.0;

    void reset() { *this = AccessLedger{}; }

    bool operator==(const AccessLedger&) const = default;

    AccessLedger& operator+=(const AccessLedger& other) {
        global_loads += other.global_loads;
        global_stores += other.global_stores;
        shared_loads += other.shared_loads;
        atomic_ops += other.atomic_ops;
        return *this;
    }
};

/// All ants' tours in one dense block: m rows padded to a multiple of theta
/// with the out-of-range sentinel city n, so tile loops never branch on row
/// ends and the pads can never match a real edge.
struct TourBuffer {
    int n = 0;
    int m = 0;
    int padded_len = 0;
    std::int32_t sentinel = 0;
    Matrix<std::int32_t> rows;
    std::vector<std::int64_t> lengths;

    static TourBuffer make(const ProblemInstance& problem,
                           std::span<const std::vector<std::int32_t>> tours,
                           std::span<const std::int64_t> lengths, int theta) {
        if (theta < 1)
            throw Error(Errc::config_error, "tile size must be >= 1");
        TourBuffer buf;
        buf.n = problem.n;
        buf.m = static_cast<int>(tours.size());
        buf.sentinel = problem.n;
        const int row_len = problem.n + 1;
        buf.padded_len = ((row_len + theta - 1) / theta) * theta;
        buf.rows = Matrix<std::int32_t>(static_cast<std::size_t>(buf.m),
                                        static_cast<std::size_t>(buf.padded_len),
                                        buf.sentinel);
        for (int k = 0; k < buf.m; ++k) {
            const auto& tour = tours[static_cast<std::size_t>(k)];
            const std::int64_t recomputed = tour_length(problem, tour);
            if (recomputed != lengths[static_cast<std::size_t>(k)])
                throw Error(Errc::inconsistent_length,
                            "stored length " + std::to_string(lengths[static_cast<std::size_t>(k)]) +
                                " of ant " + std::to_string(k) + " != recomputed " +
                                std::to_string(recomputed));
            std::copy(tour.begin(), tour.end(),
                      buf.rows.row(static_cast<std::size_t>(k)).begin());
        }
        buf.lengths.assign(lengths.begin(), lengths.end());
        return buf;
    }

    static TourBuffer from_ants(const ProblemInstance& problem,
                                std::span<const AntState> ants, int theta) {
        std::vector<std::vector<std::int32_t>> tours;
        std::vector<std::int64_t> lengths;
        tours.reserve(ants.size());
        lengths.reserve(ants.size());
        for (const auto& ant : ants) {
            tours.push_back(ant.tour);
            lengths.push_back(ant.length);
        }
        return make(problem, tours, lengths, theta);
    }

    std::span<const std::int32_t> row(int k) const {
        return rows.row(static_cast<std::size_t>(k));
    }
};

namespace detail {

/// Amortized global share of `inspections` edge reads (2 loads each) when
/// theta threads cooperate per tile. Scaling the integer count once keeps
/// the result bit-identical to the closed-form prediction.
inline double global_share(std::int64_t inspections, int theta) {
    return 2.0 * static_cast<double>(inspections) / static_cast<double>(theta);
}

inline std::vector<double> inverse_lengths(const TourBuffer& tours) {
    std::vector<double> inv(tours.lengths.size());
    for (std::size_t k = 0; k < inv.size(); ++k)
        inv[k] = 1.0 / static_cast<double>(tours.lengths[k]);
    return inv;
}

/// Pheromone gathered by cell (i,j): scans every ant's tour in ant-major,
/// step-minor order, which fixes the floating-point summation order for all
/// gather-style strategies regardless of tiling or worker count.
inline double gather_cell(const TourBuffer& tours, std::span<const double> inv_len,
                          std::int32_t i, std::int32_t j) {
    double acc = 0.0;
    const int steps = tours.n;
    for (int k = 0; k < tours.m; ++k) {
        const std::int32_t* row = tours.row(k).data();
        const double w = inv_len[static_cast<std::size_t>(k)];
        for (int s = 0; s < steps; ++s) {
            const std::int32_t a = row[s];
            const std::int32_t b = row[s + 1];
            const bool match = (a == i && b == j) || (a == j && b == i);
            acc += match ? w : 0.0;
        }
    }
    return acc;
}

/// Scan run by a surplus symmetric-reduction thread that covers the diagonal
/// cells (i,i) and (j,j). Consecutive tour entries always differ, so the
/// result is zero, but the thread performs the same uniform scan the access
/// model charges for it.
inline double gather_diagonal_pair(const TourBuffer& tours, std::span<const double> inv_len,
                                   std::int32_t i, std::int32_t j) {
    double acc = 0.0;
    const int steps = tours.n;
    for (int k = 0; k < tours.m; ++k) {
        const std::int32_t* row = tours.row(k).data();
        const double w = inv_len[static_cast<std::size_t>(k)];
        for (int s = 0; s < steps; ++s) {
            const std::int32_t a = row[s];
            const std::int32_t b = row[s + 1];
            const bool match = (a == i && b == i) || (a == j && b == j);
            acc += match ? w : 0.0;
        }
    }
    return acc;
}

} // namespace detail

/// tau <- (1-rho) * tau on every cell. One load and one store per cell.
inline void evaporate(PheromoneMatrix& tau, double rho, AccessLedger& ledger,
                      ThreadPool* pool = nullptr) {
    if (!(rho > 0.0 && rho <= 1.0))
        throw Error(Errc::config_error, "rho must be in (0,1]");
    const int n = tau.n();
    const double keep = 1.0 - rho;
    parallel_rows(pool, n, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            double* row = tau.tau.data() + i * n;
            for (int j = 0; j < n; ++j) row[j] *= keep;
        }
    });
    const double cells = static_cast<double>(n) * n;
    ledger.global_loads += cells;
    ledger.global_stores += cells;
}

/// Per-ant scatter: every traversed edge gains 1/C on both orientations, in
/// ant-major, edge-minor order. Runs on one thread so the result is
/// bit-identical for any worker count; the ledger still records the atomic
/// add a per-edge-endpoint GPU scheme would issue.
inline void deposit_accumulate(PheromoneMatrix& tau, const TourBuffer& tours,
                               AccessLedger& ledger) {
    const auto inv_len = detail::inverse_lengths(tours);
    for (int k = 0; k < tours.m; ++k) {
        const std::int32_t* row = tours.row(k).data();
        const double w = inv_len[static_cast<std::size_t>(k)];
        for (int s = 0; s < tours.n; ++s) {
            tau.at(row[s], row[s + 1]) += w;
            tau.at(row[s + 1], row[s]) += w;
        }
    }
    ledger.atomic_ops +=
        2.0 * static_cast<double>(tours.m) * static_cast<double>(tours.n);
}

/// Scatter-to-gather: one conceptual thread per matrix cell scans all tours
/// for its edge. No synchronization, but every thread re-reads the whole
/// tour block from global memory (2 loads per inspected edge).
inline void deposit_scatter_gather(PheromoneMatrix& tau, const TourBuffer& tours,
                                   AccessLedger& ledger, ThreadPool* pool = nullptr) {
    const int n = tau.n();
    const auto inv_len = detail::inverse_lengths(tours);
    parallel_rows(pool, n, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            for (int j = 0; j < n; ++j) {
                tau.at(static_cast<int>(i), j) +=
                    detail::gather_cell(tours, inv_len, static_cast<std::int32_t>(i), j);
            }
        }
    });
    const std::int64_t inspections = static_cast<std::int64_t>(n) * n * tours.m * tours.n;
    ledger.global_loads += detail::global_share(inspections, 1);
    ledger.global_stores += static_cast<double>(n) * n;
}

/// Tiled scatter-to-gather: blocks of theta cells share each tile of tour
/// entries through a small local buffer (the shared-memory stand-in), so
/// only a 1/theta share of the edge reads hits global memory.
inline void deposit_scatter_gather_tiled(PheromoneMatrix& tau, const TourBuffer& tours,
                                         int theta, AccessLedger& ledger,
                                         ThreadPool* pool = nullptr) {
    if (theta < 1)
        throw Error(Errc::config_error, "tile size must be >= 1");
    if (tours.padded_len % theta != 0)
        throw Error(Errc::config_error,
                    "tour buffer padded for tile size incompatible with theta");
    const int n = tau.n();
    const auto inv_len = detail::inverse_lengths(tours);
    const std::int64_t cells = static_cast<std::int64_t>(n) * n;
    const std::int64_t blocks = (cells + theta - 1) / theta;

    parallel_rows(pool, blocks, [&](std::int64_t begin, std::int64_t end) {
        std::vector<double> acc(static_cast<std::size_t>(theta));
        std::vector<std::int32_t> tile(static_cast<std::size_t>(theta) + 1);
        std::vector<std::int32_t> cell_i(static_cast<std::size_t>(theta));
        std::vector<std::int32_t> cell_j(static_cast<std::size_t>(theta));
        for (std::int64_t block = begin; block < end; ++block) {
            const std::int64_t cell0 = block * theta;
            const int width = static_cast<int>(std::min<std::int64_t>(theta, cells - cell0));
            for (int c = 0; c < width; ++c) {
                acc[static_cast<std::size_t>(c)] = 0.0;
                cell_i[static_cast<std::size_t>(c)] = static_cast<std::int32_t>((cell0 + c) / n);
                cell_j[static_cast<std::size_t>(c)] = static_cast<std::int32_t>((cell0 + c) % n);
            }

            for (int k = 0; k < tours.m; ++k) {
                const std::int32_t* row = tours.row(k).data();
                const double w = inv_len[static_cast<std::size_t>(k)];
                for (int tile_start = 0; tile_start < tours.padded_len;
                     tile_start += theta) {
                    std::copy(row + tile_start, row + tile_start + theta, tile.begin());
                    tile[static_cast<std::size_t>(theta)] =
                        (tile_start + theta < tours.padded_len) ? row[tile_start + theta]
                                                                : tours.sentinel;
                    for (int c = 0; c < width; ++c) {
                        const std::int32_t ci = cell_i[static_cast<std::size_t>(c)];
                        const std::int32_t cj = cell_j[static_cast<std::size_t>(c)];
                        double a = acc[static_cast<std::size_t>(c)];
                        for (int u = 0; u < theta; ++u) {
                            const std::int32_t x = tile[static_cast<std::size_t>(u)];
                            const std::int32_t y = tile[static_cast<std::size_t>(u) + 1];
                            const bool match = (x == ci && y == cj) || (x == cj && y == ci);
                            a += match ? w : 0.0;
                        }
                        acc[static_cast<std::size_t>(c)] = a;
                    }
                }
            }
            for (int c = 0; c < width; ++c) {
                tau.at(cell_i[static_cast<std::size_t>(c)], cell_j[static_cast<std::size_t>(c)]) +=
                    acc[static_cast<std::size_t>(c)];
            }
        }
    });

    // Pad inspections exist only to keep the tile loop uniform; the model
    // charges the n real edges of each tour, split 1/theta global.
    const std::int64_t inspections = cells * tours.m * tours.n;
    const double global = detail::global_share(inspections, theta);
    ledger.global_loads += global;
    ledger.shared_loads += detail::global_share(inspections, 1) - global;
    ledger.global_stores += static_cast<double>(cells);
}

/// Symmetric reduction: one thread per unordered city pair {i,j} scans for
/// either orientation and mirrors the result, halving the thread count.
/// Surplus threads cover diagonal cells in pairs so exactly ceil(n^2/2)
/// uniform threads run, which is what the access model charges.
inline void deposit_symmetric_reduction(PheromoneMatrix& tau, const TourBuffer& tours,
                                        int theta, AccessLedger& ledger,
                                        ThreadPool* pool = nullptr) {
    if (theta < 1)
        throw Error(Errc::config_error, "tile size must be >= 1");
    const int n = tau.n();
    const auto inv_len = detail::inverse_lengths(tours);

    // Pair threads, parallel over the first city.
    parallel_rows(pool, n, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            for (int j = static_cast<int>(i) + 1; j < n; ++j) {
                const double delta =
                    detail::gather_cell(tours, inv_len, static_cast<std::int32_t>(i), j);
                tau.at(static_cast<int>(i), j) += delta;
                tau.at(j, static_cast<int>(i)) += delta;
            }
        }
    });
    // Diagonal threads: same uniform scan, two diagonal cells each; a tour
    // never repeats a city so these add exactly zero.
    const int diag_threads = (n + 1) / 2;
    parallel_rows(pool, diag_threads, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t d = begin; d < end; ++d) {
            const std::int32_t i = static_cast<std::int32_t>(2 * d);
            const std::int32_t j = std::min(i + 1, n - 1);
            const double delta = detail::gather_diagonal_pair(tours, inv_len, i, j);
            tau.at(i, i) += delta;
            if (j != i) tau.at(j, j) += delta;
        }
    });

    const std::int64_t threads = (static_cast<std::int64_t>(n) * n + 1) / 2;
    const std::int64_t inspections = threads * tours.m * tours.n;
    const double global = detail::global_share(inspections, theta);
    ledger.global_loads += global;
    ledger.shared_loads += detail::global_share(inspections, 1) - global;
    ledger.global_stores += static_cast<double>(n) * n;
}

inline void apply_deposit(const DepositStrategy& strategy, PheromoneMatrix& tau,
                          const TourBuffer& tours, AccessLedger& ledger,
                          ThreadPool* pool = nullptr) {
    switch (strategy.variant) {
    case Deposit::accumulate:
        deposit_accumulate(tau, tours, ledger);
        return;
    case Deposit::scatter_gather:
        deposit_scatter_gather(tau, tours, ledger, pool);
        return;
    case Deposit::scatter_gather_tiled:
        deposit_scatter_gather_tiled(tau, tours, strategy.tile_size, ledger, pool);
        return;
    case Deposit::symmetric_reduction:
        deposit_symmetric_reduction(tau, tours, strategy.tile_size, ledger, pool);
        return;
    }
    throw Error(Errc::config_error, "unknown deposit strategy");
}

/// Closed-form access counts for one deposit kernel. The forms generalize
/// the m = n case by charging m*n inspected edges per scanning thread; the
/// engine checks measured ledgers against these after every update.
inline AccessLedger predicted_access_cost(const DepositStrategy& strategy, int n, int m,
                                          int theta) {
    AccessLedger out;
    const std::int64_t cells = static_cast<std::int64_t>(n) * n;
    switch (strategy.variant) {
    case Deposit::accumulate:
        out.atomic_ops = 2.0 * static_cast<double>(m) * static_cast<double>(n);
        return out;
    case Deposit::scatter_gather: {
        const std::int64_t inspections = cells * m * n;
        out.global_loads = detail::global_share(inspections, 1);
        out.global_stores = static_cast<double>(cells);
        return out;
    }
    case Deposit::scatter_gather_tiled: {
        const std::int64_t inspections = cells * m * n;
        out.global_loads = detail::global_share(inspections, theta);
        out.shared_loads = detail::global_share(inspections, 1) - out.global_loads;
        out.global_stores = static_cast<double>(cells);
        return out;
    }
    case Deposit::symmetric_reduction: {
        const std::int64_t threads = (cells + 1) / 2;
        const std::int64_t inspections = threads * m * n;
        out.global_loads = detail::global_share(inspections, theta);
        out.shared_loads = detail::global_share(inspections, 1) - out.global_loads;
        out.global_stores = static_cast<double>(cells);
        return out;
    }
    }
    throw Error(Errc::config_error, "unknown deposit strategy");
}

/// Worst cell-wise disagreement between two pheromone matrices.
struct MatrixDiff {
    double max_abs_diff = 0.0;
    int i = 0;
    int j = 0;
};

inline MatrixDiff max_cell_difference(const PheromoneMatrix& a, const PheromoneMatrix& b) {
    MatrixDiff diff;
    const int n = a.n();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double d = std::abs(a.at(i, j) - b.at(i, j));
            if (d > diff.max_abs_diff) diff = {d, i, j};
        }
    }
    return diff;
}

} // namespace aco
