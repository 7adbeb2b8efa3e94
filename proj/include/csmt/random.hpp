#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace csmt {

// Identifies a reproducible random substream. Identical (master_seed,
// stream_key) pairs produce identical draw sequences on every platform;
// distinct keys give statistically independent streams. Substreams are
// derived by appending to the key, so adding streams never perturbs
// existing ones.
struct RandomSource {
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> stream_key;

    RandomSource() = default;
    explicit RandomSource(std::uint64_t seed) : master_seed(seed) {}

    RandomSource with(std::uint64_t key) const {
        RandomSource derived = *this;
        derived.stream_key.push_back(key);
        return derived;
    }
};

// Counter-style generator seeded from a RandomSource via splitmix64 key
// mixing. Avoids std:: distributions, whose output is implementation
// defined, so draw sequences are portable.
class Rng {
public:
    explicit Rng(const RandomSource& src);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    // Standard normal via Box-Muller; one spare value is cached.
    double normal();

    // Uniform integer in [0, bound) by rejection sampling. bound >= 1.
    std::uint64_t below(std::uint64_t bound);

    // Uniform random permutation of {0, ..., n-1} (Fisher-Yates).
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace csmt
