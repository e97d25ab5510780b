#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "aco/errors.hpp"

namespace aco {

enum class EdgeWeightType { euc_2d, ceil_2d, att };

inline const char* edge_weight_type_name(EdgeWeightType t) noexcept {
    switch (t) {
    case EdgeWeightType::euc_2d: return "EUC_2D";
    case EdgeWeightType::ceil_2d: return "CEIL_2D";
    case EdgeWeightType::att: return "ATT";
    }
    return "?";
}

struct InstanceSpec {
    std::string name;
    int dimension = 0;
    EdgeWeightType edge_weight_type = EdgeWeightType::euc_2d;
    std::vector<std::pair<double, double>> coords; // 0-based city order
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline bool parse_double(std::string_view s, double& out) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

inline bool parse_int(std::string_view s, long& out) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

// TSPLIB "nint": nearest integer, halves rounded up.
inline int nint(double x) noexcept { return static_cast<int>(x + 0.5); }

} // namespace detail

/// Parses a node-coordinate TSPLIB instance (keyword header plus
/// NODE_COORD_SECTION). File node ids are 1-based; coords are stored 0-based.
inline InstanceSpec parse_instance(std::string_view text) {
    InstanceSpec spec;
    bool have_name = false, have_dim = false, have_ewt = false, have_coords = false;

    std::size_t pos = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= text.size()) return false;
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        line = detail::trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        return true;
    };

    std::string_view line;
    while (next_line(line)) {
        if (line.empty()) continue;
        if (line == "EOF") break;

        if (line == "NODE_COORD_SECTION") {
            if (!have_dim)
                throw Error(Errc::missing_field,
                            "DIMENSION must precede NODE_COORD_SECTION");
            spec.coords.assign(static_cast<std::size_t>(spec.dimension), {0.0, 0.0});
            std::vector<bool> seen(static_cast<std::size_t>(spec.dimension), false);
            int count = 0;
            while (count < spec.dimension) {
                if (!next_line(line) || line == "EOF")
                    throw Error(Errc::dimension_mismatch,
                                "NODE_COORD_SECTION ended after " + std::to_string(count) +
                                    " of " + std::to_string(spec.dimension) + " coords");
                if (line.empty()) continue;
                auto tokens = detail::split_ws(line);
                if (tokens.size() != 3)
                    throw Error(Errc::malformed_coord,
                                "coord line needs <id> <x> <y>: '" + std::string(line) + "'");
                long id;
                double x, y;
                if (!detail::parse_int(tokens[0], id) || !detail::parse_double(tokens[1], x) ||
                    !detail::parse_double(tokens[2], y))
                    throw Error(Errc::malformed_coord,
                                "non-numeric coord line: '" + std::string(line) + "'");
                if (id < 1 || id > spec.dimension)
                    throw Error(Errc::malformed_coord,
                                "node id " + std::to_string(id) + " outside 1.." +
                                    std::to_string(spec.dimension));
                if (seen[static_cast<std::size_t>(id - 1)])
                    throw Error(Errc::malformed_coord,
                                "duplicate node id " + std::to_string(id));
                seen[static_cast<std::size_t>(id - 1)] = true;
                spec.coords[static_cast<std::size_t>(id - 1)] = {x, y};
                ++count;
            }
            // Anything after the declared count other than EOF/blank means the
            // section disagrees with DIMENSION.
            while (next_line(line)) {
                if (line.empty()) continue;
                if (line == "EOF") break;
                if (detail::split_ws(line).size() == 3)
                    throw Error(Errc::dimension_mismatch,
                                "more coord lines than DIMENSION=" +
                                    std::to_string(spec.dimension));
                break;
            }
            have_coords = true;
            break;
        }

        if (line == "EDGE_WEIGHT_SECTION")
            throw Error(Errc::unsupported_edge_weight_type,
                        "explicit edge weight matrices are not supported");

        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) continue; // unknown bare keyword
        std::string_view key = detail::trim(line.substr(0, colon));
        std::string_view value = detail::trim(line.substr(colon + 1));

        if (key == "NAME") {
            spec.name = std::string(value);
            have_name = true;
        } else if (key == "DIMENSION") {
            long dim;
            if (!detail::parse_int(value, dim))
                throw Error(Errc::missing_field,
                            "DIMENSION value is not an integer: '" + std::string(value) + "'");
            if (dim < 2)
                throw Error(Errc::dimension_mismatch,
                            "DIMENSION must be at least 2, got " + std::to_string(dim));
            spec.dimension = static_cast<int>(dim);
            have_dim = true;
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value == "EUC_2D")
                spec.edge_weight_type = EdgeWeightType::euc_2d;
            else if (value == "CEIL_2D")
                spec.edge_weight_type = EdgeWeightType::ceil_2d;
            else if (value == "ATT")
                spec.edge_weight_type = EdgeWeightType::att;
            else
                throw Error(Errc::unsupported_edge_weight_type,
                            "unsupported EDGE_WEIGHT_TYPE '" + std::string(value) + "'");
            have_ewt = true;
        }
        // TYPE, COMMENT and other keywords carry no information we need.
    }

    if (!have_name) throw Error(Errc::missing_field, "missing NAME header");
    if (!have_dim) throw Error(Errc::missing_field, "missing DIMENSION header");
    if (!have_ewt) throw Error(Errc::missing_field, "missing EDGE_WEIGHT_TYPE header");
    if (!have_coords) throw Error(Errc::missing_field, "missing NODE_COORD_SECTION");
    return spec;
}

/// Integer edge weight for cities i, j under the instance's metric.
/// Rounding follows the TSPLIB95 conventions exactly.
inline std::int32_t edge_weight(const InstanceSpec& spec, int i, int j) {
    if (i < 0 || j < 0 || i >= spec.dimension || j >= spec.dimension)
        throw Error(Errc::index_out_of_range,
                    "city index outside 0.." + std::to_string(spec.dimension - 1));
    const auto [xi, yi] = spec.coords[static_cast<std::size_t>(i)];
    const auto [xj, yj] = spec.coords[static_cast<std::size_t>(j)];
    const double dx = xi - xj;
    const double dy = yi - yj;
    switch (spec.edge_weight_type) {
    case EdgeWeightType::euc_2d:
        return detail::nint(std::sqrt(dx * dx + dy * dy));
    case EdgeWeightType::ceil_2d:
        return static_cast<std::int32_t>(std::ceil(std::sqrt(dx * dx + dy * dy)));
    case EdgeWeightType::att: {
        const double r = std::sqrt((dx * dx + dy * dy) / 10.0);
        const int t = detail::nint(r);
        return (t < r) ? t + 1 : t;
    }
    }
    return 0;
}

/// Canonical text form of an InstanceSpec. parse(canonical_text(s)) == s,
/// which the tests use as a round-trip fixed point.
inline std::string canonical_text(const InstanceSpec& spec) {
    std::ostringstream out;
    out << "NAME : " << spec.name << '\n';
    out << "TYPE : TSP\n";
    out << "DIMENSION : " << spec.dimension << '\n';
    out << "EDGE_WEIGHT_TYPE : " << edge_weight_type_name(spec.edge_weight_type) << '\n';
    out << "NODE_COORD_SECTION\n";
    char buf[64];
    for (int i = 0; i < spec.dimension; ++i) {
        const auto [x, y] = spec.coords[static_cast<std::size_t>(i)];
        out << (i + 1);
        for (double v : {x, y}) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
            (void)ec;
            out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
        }
        out << '\n';
    }
    out << "EOF\n";
    return out.str();
}

/// Reads a TSPLIB tour file (TOUR_SECTION, 1-based ids, -1 terminator) and
/// returns the visiting order 0-based. Used by tests and `verify` tooling.
inline std::vector<std::int32_t> parse_tour(std::string_view text) {
    std::vector<std::int32_t> tour;
    bool in_section = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = detail::trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        if (line.empty()) {
            if (pos > text.size()) break;
            continue;
        }
        if (!in_section) {
            if (line == "TOUR_SECTION") in_section = true;
            if (pos > text.size()) break;
            continue;
        }
        if (line == "-1" || line == "EOF") break;
        for (auto tok : detail::split_ws(line)) {
            long id;
            if (!detail::parse_int(tok, id))
                throw Error(Errc::malformed_coord,
                            "non-numeric tour entry: '" + std::string(tok) + "'");
            if (id == -1) return tour;
            tour.push_back(static_cast<std::int32_t>(id - 1));
        }
        if (pos > text.size()) break;
    }
    if (!in_section)
        throw Error(Errc::missing_field, "missing TOUR_SECTION");
    return tour;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::io_error, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline InstanceSpec load_instance(const std::string& path) {
    return parse_instance(read_file(path));
}

} // namespace aco
