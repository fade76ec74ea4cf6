#pragma once

#include <cstdint>
#include <span>

#include "latentpack/errors.hpp"

namespace latentpack::rng {

// Counter-based generator built on the splitmix64 finalizer.  Every random
// value is a pure function of (seed, counter), so sampling loops can be
// parallelized over the counter without changing the output stream, and
// ports in other languages reproduce tables bit for bit from the same seed.
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

// Value of the stream at position `counter` (0-based).  Equals the
// (counter+1)-th output of a classic splitmix64 seeded with `seed`.
inline constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
    return mix64(seed + (counter + 1) * kGolden);
}

// Uniform double in [0, 1) with 53 random bits.
inline double unit_real(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(at(seed, counter) >> 11) * 0x1.0p-53;
}

// Derives an independent sub-stream seed; `salt` identifies the consumer.
inline constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
    return mix64(seed ^ mix64(salt + kGolden));
}

// Sequential convenience wrapper over the counter stream.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return at(seed_, counter_++); }
    double next_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection; bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw ParamError("rng: zero bound");
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    // Standard normal via Box-Muller (consumes two counters).
    double next_normal();

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

// Smallest index i with cumulative probability above u, scanning in index
// order; falls back to the last index with positive mass when rounding
// pushes u past the accumulated total.
std::size_t inverse_cdf(std::span<const double> probs, double u);

}  // namespace latentpack::rng
