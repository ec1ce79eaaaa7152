#pragma once

#include <array>
#include <cstdint>

namespace tripa {

// SplitMix64 step; used for seed expansion and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** generator with (seed, stream) initialization. The 4-word state
// is derived by running SplitMix64 over seed after mixing in the stream id,
// so (seed, k) for k = 0,1,2,... gives independent replication streams.
// Bounded draws use Lemire rejection; u01() has 53 random bits.
class Rng {
public:
    static constexpr const char* algorithm =
        "xoshiro256** (state from splitmix64(seed ^ splitmix64(stream)))";

    Rng() : Rng(0, 0) {}

    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t mix = stream;
        std::uint64_t base = seed ^ splitmix64(mix);
        for (auto& word : s_) word = splitmix64(base);
        // all-zero state is invalid for xoshiro; the seeding above cannot
        // produce it except with negligible probability, but be safe
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, bound); bound > 0
    std::uint64_t below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    const std::array<std::uint64_t, 4>& state() const { return s_; }
    void set_state(const std::array<std::uint64_t, 4>& s) { s_ = s; }

    friend bool operator==(const Rng& a, const Rng& b) { return a.s_ == b.s_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace tripa
