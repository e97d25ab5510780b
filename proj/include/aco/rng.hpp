#pragma once

#include <cstdint>

namespace aco {

// Philox4x32-10 keyed counter permutation (Salmon et al., SC 2011).
// Every output is a pure function of (key, counter), so draws can be
// replayed from any worker without shared generator state.
namespace philox {

inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
inline constexpr std::uint32_t kMult0 = 0xD2511F53u;
inline constexpr std::uint32_t kMult1 = 0xCD9E8D57u;

struct Block {
    std::uint32_t v[4];
};

inline void round_once(Block& b, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * b.v[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * b.v[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    b.v[0] = hi1 ^ b.v[1] ^ k0;
    b.v[1] = lo1;
    b.v[2] = hi0 ^ b.v[3] ^ k1;
    b.v[3] = lo0;
}

inline Block permute(Block counter, std::uint64_t key) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int r = 0; r < 10; ++r) {
        round_once(counter, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return counter;
}

} // namespace philox

/// Deterministic per-ant random stream. The 128-bit counter folds
/// (iteration, ant, step, draw index), so the value of any draw depends only
/// on the seed and those coordinates, never on scheduling order.
class RngStream {
public:
    RngStream() = default;

    RngStream(std::uint64_t key, std::uint32_t iteration, std::uint32_t ant)
        : key_(key), iteration_(iteration), ant_(ant) {}

    std::uint32_t iteration() const noexcept { return iteration_; }
    std::uint32_t ant() const noexcept { return ant_; }
    std::uint32_t step() const noexcept { return step_; }
    std::uint32_t draw_index() const noexcept { return draw_; }

    /// Positions the stream at a construction step and rewinds the draw
    /// cursor, so each step consumes draws 0,1,2,... independently of how
    /// many the previous step used.
    void set_step(std::uint32_t step) noexcept {
        step_ = step;
        draw_ = 0;
    }

    /// Uniform in [0,1) with 53 random bits; advances the draw cursor.
    double next_uniform() noexcept { return uniform_at(step_, draw_++); }

    /// Pure lookup of the draw at (step, draw) without touching the cursor.
    double uniform_at(std::uint32_t step, std::uint32_t draw) const noexcept {
        const philox::Block out =
            philox::permute({{draw, step, ant_, iteration_}}, key_);
        const std::uint64_t bits =
            (static_cast<std::uint64_t>(out.v[1]) << 32) | out.v[0];
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_ = 0;
    std::uint32_t iteration_ = 0;
    std::uint32_t ant_ = 0;
    std::uint32_t step_ = 0;
    std::uint32_t draw_ = 0;
};

} // namespace aco
