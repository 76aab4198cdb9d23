#pragma once

#include <cstdint>

namespace toruslab {

// Splittable counter-based RNG (splitmix64 core). Every randomized code path
// in the library derives its stream from one root seed via split(), so results
// are identical regardless of evaluation order or worker count, and a given
// (seed, stream) pair always yields the same sequence on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed ^ kSalt)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform in [0, 1), 53 significant bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi] inclusive. Modulo bias is < range/2^64; callers here
    // use ranges < 2^32, where the bias is far below any tolerance in play.
    long long next_int(long long lo, long long hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(next_u64() % range);
    }

    // Independent child stream. Children with distinct ids never correlate
    // with each other or with the parent's own output sequence.
    Rng split(std::uint64_t stream_id) const {
        Rng child(0);
        child.state_ = mix(state_ ^ mix(stream_id + 0x632be59bd9b4e019ull));
        return child;
    }

private:
    static constexpr std::uint64_t kSalt = 0x9e3779b97f4a7c15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace toruslab
