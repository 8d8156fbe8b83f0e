#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace mvdrift {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11). Maps a
/// 128-bit counter and 64-bit key to 128 pseudo-random bits.
[[nodiscard]] std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                                      std::array<std::uint32_t, 2> key) noexcept;

/// Independent random-number families. Streams in different domains never
/// collide even when their node/branch indices do.
enum class StreamDomain : std::uint32_t {
    outer = 1,
    branch = 2,
    moments = 3,
    replication = 4,
    observation = 5,
    example_outer = 6,
    example_branch = 7,
    baseline_branch = 8,
    baseline_coarse = 9,
};

/// Identifies one Gaussian stream. Every draw is a pure function of
/// (seed, domain, node, branch, draw index), so streams can be generated in
/// any order, on any thread, with identical results.
struct StreamKey {
    std::uint64_t seed = 0;
    StreamDomain domain = StreamDomain::outer;
    std::uint32_t node = 0;
    std::uint32_t branch = 0;

    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// SplitMix64 finaliser applied to seed + index. Used to derive per-replication
/// master seeds from a single run seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Sequential standard normal draws from one StreamKey (Box-Muller on 53-bit
/// uniforms; each Philox block yields two normals).
class NormalStream {
public:
    explicit NormalStream(const StreamKey& key) noexcept;

    [[nodiscard]] double next() noexcept;

    /// Fills `out` with `scale * Z` for successive draws Z.
    void fill(std::span<double> out, double scale = 1.0) noexcept;

    /// Uniform draw on (0, 1), consuming half a block.
    [[nodiscard]] double uniform() noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;  // 32-bit words consumed from block_
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mvdrift
