#include "csmt/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csmt {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

Rng::Rng(const RandomSource& src) {
    std::uint64_t h = mix64(src.master_seed);
    for (std::uint64_t key : src.stream_key) {
        h = mix64(h ^ mix64(key));
    }
    state_ = h;
}

std::uint64_t Rng::next_u64() {
    state_ += kGamma;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("Rng::below: bound must be positive");
    }
    // Rejection from the top to make the draw exactly uniform.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
        draw = next_u64();
    } while (draw >= limit);
    return draw % bound;
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) {
        perm[i] = i;
    }
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(below(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

} // namespace csmt
