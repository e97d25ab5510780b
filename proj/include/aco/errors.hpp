#pragma once

#include <stdexcept>
#include <string>

namespace aco {

enum class Errc {
    // tsplib parsing
    missing_field,
    unsupported_edge_weight_type,
    malformed_coord,
    dimension_mismatch,
    index_out_of_range,
    // model
    overflow,
    invalid_length,
    not_a_permutation,
    not_closed,
    // construction
    all_visited,
    // pheromone
    inconsistent_length,
    // engine / cli
    io_error,
    config_error,
};

/// All library errors are thrown as aco::Error; `code()` identifies the
/// failure class so callers can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::missing_field: return "missing_field";
    case Errc::unsupported_edge_weight_type: return "unsupported_edge_weight_type";
    case Errc::malformed_coord: return "malformed_coord";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::index_out_of_range: return "index_out_of_range";
    case Errc::overflow: return "overflow";
    case Errc::invalid_length: return "invalid_length";
    case Errc::not_a_permutation: return "not_a_permutation";
    case Errc::not_closed: return "not_closed";
    case Errc::all_visited: return "all_visited";
    case Errc::inconsistent_length: return "inconsistent_length";
    case Errc::io_error: return "io_error";
    case Errc::config_error: return "config_error";
    }
    return "unknown";
}

} // namespace aco
