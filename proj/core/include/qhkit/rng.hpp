#pragma once

#include <cstdint>

namespace qh {

// Seeded pseudo-random stream built on the splitmix64 generator.
//
// The integer stream is a pure function of the seed: identical seeds produce
// identical uint64 sequences on every platform, independent of thread
// placement or call site. Gaussian draws use the Box-Muller transform and
// consume exactly two uint64 values each (no cached spare), so the stream
// position is always well defined.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53 significant bits.
    double next_double();

    // Standard normal via Box-Muller.
    double next_gaussian();

    // Independent substream for parallel work. Does not advance this stream.
    SeededRng fork(std::uint64_t stream) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace qh
