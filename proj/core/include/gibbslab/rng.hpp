#ifndef GIBBSLAB_RNG_HPP_
#define GIBBSLAB_RNG_HPP_

#include <cstdint>
#include <random>

namespace gibbslab {

// Deterministic generator: identical seeds give identical streams on every
// platform (uniform doubles are derived from raw 64-bit draws, not from
// std::uniform_real_distribution, whose output is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t below(std::uint64_t n);

    // Independent stream for a worker/chain: mixes the base seed with the
    // stream index through splitmix64.
    static Rng derive(std::uint64_t seed, std::uint64_t stream);

private:
    std::mt19937_64 engine_;
};

}  // namespace gibbslab

#endif  // GIBBSLAB_RNG_HPP_
