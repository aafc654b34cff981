#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <random>

namespace switchdiff {

/// Anything the samplers can draw from: uniforms on (0, 1] and standard normals.
/// Test stubs implement the same two members.
template <class R>
concept RandomSource = requires(R& r) {
    { r.uniform() } -> std::convertible_to<double>;
    { r.normal() } -> std::convertible_to<double>;
};

/// SplitMix64 finalizer; bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based key for the stream of sample `index` under `master_seed`.
/// Depends only on the pair, never on scheduling.
constexpr std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(mix64(master_seed) ^ mix64(index ^ 0x632be59bd9b4e019ULL));
}

/// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t key) { seed(key); }

    void seed(std::uint64_t key) {
        // state filled from a SplitMix64 sequence, never all-zero
        std::uint64_t x = key;
        for (auto& s : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            s = z ^ (z >> 31);
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4]{};
};

/// One independent random stream. Cheap to construct; one per Monte Carlo sample.
class Stream {
public:
    explicit Stream(std::uint64_t key) : engine_(key) {}
    Stream(std::uint64_t master_seed, std::uint64_t index) : engine_(derive_key(master_seed, index)) {}

    /// Uniform on (0, 1], 53-bit resolution.
    double uniform() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }
    double normal() { return normal_(engine_); }

    Xoshiro256pp& engine() { return engine_; }

private:
    Xoshiro256pp engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

static_assert(RandomSource<Stream>);

}  // namespace switchdiff
