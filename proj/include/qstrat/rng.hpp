#pragma once

// Seeded random streams. Every replicate r of an experiment draws from the
// stream (master_seed, r), so results do not depend on scheduling.
//
// The engine is xoshiro256** seeded through splitmix64. Integer and real
// conversions are written out here rather than taken from <random>, whose
// distributions are implementation-defined.

#include <array>
#include <bit>
#include <cstdint>
#include <limits>

namespace qstrat {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t master_seed, std::uint64_t stream = 0)
        : seed_(master_seed), stream_(stream) {
        std::uint64_t sm = master_seed;
        const std::uint64_t mixed = splitmix64(sm) ^ (stream * 0xD1B54A32D192ED03ULL);
        std::uint64_t init = mixed;
        for (auto& word : state_) word = splitmix64(init);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = std::rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1): midpoints of a 2^-53 grid.
    double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    // Uniform integer in [0, n), n >= 1 (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 prod = static_cast<unsigned __int128>((*this)()) * n;
        auto low = static_cast<std::uint64_t>(prod);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                prod = static_cast<unsigned __int128>((*this)()) * n;
                low = static_cast<std::uint64_t>(prod);
            }
        }
        return static_cast<std::uint64_t>(prod >> 64);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace qstrat
