#include "sparsechan/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sparsechan {

namespace {

// splitmix64 output function (Steele, Lea, Flood 2014); also used as the
// seed-mixing step for fork().
std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
    // Expand the seed into four state words with successive splitmix64 steps.
    std::uint64_t s = seed;
    for (auto& w : state_) {
        w = splitmix64_mix(s);
        s = w;
    }
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256++ (Blackman, Vigna 2018)
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    ++position_;
    return result;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double RngStream::rademacher() {
    return (next_u64() >> 63) ? 1.0 : -1.0;
}

double RngStream::gaussian() {
    // u1 in (0, 1] so the log is finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RngStream::below: n must be positive");
    // Modulo bias is < n / 2^64, negligible for the matrix sizes used here.
    return next_u64() % n;
}

RngStream RngStream::fork(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t child =
        splitmix64_mix(seed_ ^ splitmix64_mix(a) ^ rotl(splitmix64_mix(b), 32));
    return RngStream(child);
}

} // namespace sparsechan
