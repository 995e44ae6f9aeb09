#pragma once

#include <cstdint>
#include <string_view>

namespace greedy {

// Deterministic random stream. All sampling goes through explicit uniform
// draws from mt19937_64-compatible state so that results are identical
// across platforms and standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    // Derives an independent stream from a root seed and a stream id
    // (e.g. "exp:ut3/rep:7"). Adding new stream ids never perturbs
    // existing streams.
    static RngStream derive(std::uint64_t root_seed, std::string_view stream_id);

    std::uint64_t next_u64();

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi);
    // Inclusive integer range.
    int uniform_int(int lo, int hi);
    // Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal();
    // Random sign in {-1, +1}.
    int sign();

private:
    // mt19937_64 state, implemented locally so the byte stream is pinned.
    static constexpr int kN = 312;
    std::uint64_t state_[kN];
    int index_;

    void seed_state(std::uint64_t seed);
    void generate_block();
};

// FNV-1a 64-bit hash, used for stream derivation and cache fingerprints.
std::uint64_t fnv1a64(std::string_view text);

} // namespace greedy
