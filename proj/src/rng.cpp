#include "greedy/rng.hpp"

#include <cmath>
#include <numbers>

namespace greedy {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RngStream::RngStream(std::uint64_t seed) {
    seed_state(seed);
}

RngStream RngStream::derive(std::uint64_t root_seed, std::string_view stream_id) {
    std::uint64_t x = root_seed ^ fnv1a64(stream_id);
    // one extra mixing round so "seed 0 / empty id" is not pathological
    std::uint64_t mixed = splitmix64(x);
    return RngStream(mixed);
}

void RngStream::seed_state(std::uint64_t seed) {
    state_[0] = seed;
    for (int i = 1; i < kN; ++i) {
        state_[i] = 6364136223846793005ULL * (state_[i - 1] ^ (state_[i - 1] >> 62)) +
                    static_cast<std::uint64_t>(i);
    }
    index_ = kN;
}

void RngStream::generate_block() {
    constexpr std::uint64_t kUpper = 0xFFFFFFFF80000000ULL;
    constexpr std::uint64_t kLower = 0x7FFFFFFFULL;
    constexpr std::uint64_t kMatrixA = 0xB5026F5AA96619E9ULL;
    constexpr int kM = 156;
    for (int i = 0; i < kN; ++i) {
        std::uint64_t x = (state_[i] & kUpper) | (state_[(i + 1) % kN] & kLower);
        std::uint64_t xa = x >> 1;
        if (x & 1ULL) xa ^= kMatrixA;
        state_[i] = state_[(i + kM) % kN] ^ xa;
    }
    index_ = 0;
}

std::uint64_t RngStream::next_u64() {
    if (index_ >= kN) generate_block();
    std::uint64_t x = state_[index_++];
    x ^= (x >> 29) & 0x5555555555555555ULL;
    x ^= (x << 17) & 0x71D67FFFEDA60000ULL;
    x ^= (x << 37) & 0xFFF7EEE000000000ULL;
    x ^= x >> 43;
    return x;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

int RngStream::uniform_int(int lo, int hi) {
    // modulo bias is irrelevant at the ranges used here (< 2^20)
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
}

double RngStream::normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int RngStream::sign() {
    return (next_u64() & 1ULL) ? 1 : -1;
}

} // namespace greedy
