#pragma once

#include <cstdint>
#include <random>

namespace igw {

/// Identifies the RNG stream a simulated object was drawn from:
/// a 64-bit master seed plus a stream index (usually the replication index).
struct SeedRecord {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const SeedRecord&, const SeedRecord&) = default;
};

/// SplitMix64 finalizer (Vigna / java.util.SplittableRandom). Bijective
/// 64-bit mix with full avalanche; the basis of the stream-splitting scheme.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives the engine seed for (master, stream, substream).
///
/// Stream splitting: each (stream, substream) pair is folded into the master
/// seed through two SplitMix64 rounds. Streams are independent of how many
/// other streams exist, so replication r always sees the same randomness no
/// matter the replication count or worker layout. Substreams give auxiliary
/// draws (e.g. an independent Gaussian) their own stream without touching
/// the primary one.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t stream,
                                    std::uint64_t substream = 0) noexcept {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (stream * 0x9E3779B97F4A7C15ULL + 1));
    if (substream != 0) {
        s = splitmix64(s ^ (substream * 0xD1B54A32D192ED03ULL + 1));
    }
    return s;
}

/// A seeded random stream. Thin wrapper over std::mt19937_64 carrying its
/// provenance; distributions from <random> apply directly.
class Rng {
public:
    explicit Rng(SeedRecord seed, std::uint64_t substream = 0)
        : seed_(seed), engine_(derive_seed(seed.master, seed.stream, substream)) {}

    Rng(std::uint64_t master, std::uint64_t stream, std::uint64_t substream = 0)
        : Rng(SeedRecord{master, stream}, substream) {}

    std::mt19937_64& engine() noexcept { return engine_; }
    const SeedRecord& seed() const noexcept { return seed_; }

    double normal(double mean = 0.0, double stddev = 1.0) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

private:
    SeedRecord seed_;
    std::mt19937_64 engine_;
};

} // namespace igw
