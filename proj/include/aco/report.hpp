#pragma once

#include <charconv>
#include <ostream>
#include <string>

#include "json.hpp"

#include "aco/engine.hpp"

namespace aco {

inline constexpr int kReportSchemaVersion = 1;

// Shortest round-trip decimal form; integral values print without a point.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, static_cast<std::size_t>(ptr - buf));
}

inline nlohmann::json ledger_to_json(const AccessLedger& ledger) {
    return nlohmann::json{
        {"global_loads", ledger.global_loads},
        {"global_stores", ledger.global_stores},
        {"shared_loads", ledger.shared_loads},
        {"atomic_ops", ledger.atomic_ops},
    };
}

inline nlohmann::json report_to_json(const RunReport& report) {
    nlohmann::json per_iteration = nlohmann::json::array();
    for (const auto& rec : report.per_iteration) {
        per_iteration.push_back({
            {"iteration", rec.iteration},
            {"best_len", rec.best_length},
            {"mean_len", rec.mean_length},
            {"construct_ms", rec.construct_ms},
            {"update_ms", rec.update_ms},
            {"ledger", ledger_to_json(rec.deposit_ledger)},
        });
    }
    return nlohmann::json{
        {"schema_version", kReportSchemaVersion},
        {"instance", report.instance_name},
        {"n", report.n},
        {"m", report.m},
        {"seed", report.seed},
        {"config",
         {
             {"alpha", report.config.params.alpha},
             {"beta", report.config.params.beta},
             {"rho", report.config.params.rho},
             {"nn", report.config.params.nn},
             {"iters", report.config.params.iterations},
             {"theta", report.config.params.tile_size},
             {"workers", report.config.workers},
             {"selection", selection_name(report.config.selection.variant)},
             {"deposit", deposit_name(report.config.deposit.variant)},
             {"random_start", report.config.random_start},
         }},
        {"best_length", report.best_length},
        {"best_tour", report.best_tour},
        {"per_iteration", per_iteration},
    };
}

/// Benchmark CSV, one row per (instance, strategy combo, repetition,
/// iteration). The trailing schema_version column guards downstream parsers
/// without disturbing the leading column layout.
inline const char* bench_csv_header() {
    return "instance,n,selection,deposit,theta,rep,iter,construct_ms,update_ms,"
           "best_len,global_loads,atomic_ops,schema_version";
}

inline void write_bench_csv_row(std::ostream& out, const std::string& instance, int n,
                                Selection selection, Deposit deposit, int theta, int rep,
                                const IterationRecord& rec) {
    out << instance << ',' << n << ',' << selection_name(selection) << ','
        << deposit_name(deposit) << ',' << theta << ',' << rep << ',' << rec.iteration
        << ',' << format_double(rec.construct_ms) << ',' << format_double(rec.update_ms)
        << ',' << rec.best_length << ',' << format_double(rec.deposit_ledger.global_loads)
        << ',' << format_double(rec.deposit_ledger.atomic_ops) << ','
        << kReportSchemaVersion << '\n';
}

} // namespace aco
