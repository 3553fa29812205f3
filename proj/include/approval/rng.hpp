#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace approval {

// SplitMix64 finalizer, used to mix seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Folds a sequence of words into one seed; order-sensitive.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

// Maps a probability-like value to an integer key (micro-units) for seeding,
// so 0.1 and 0.1000000001 derive the same stream.
std::uint64_t seed_key(double value);

// mt19937_64 with our own draws, so the streams do not depend on the
// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }
    // Uniform in [0, bound), unbiased. bound must be positive.
    std::uint64_t below(std::uint64_t bound);
    // Uniform in [0, 1) with 53 random bits.
    double unit();
    bool bernoulli(double prob) { return unit() < prob; }

private:
    std::mt19937_64 engine_;
};

} // namespace approval
