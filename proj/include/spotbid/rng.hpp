#pragma once

#include <cstdint>
#include <random>

namespace spotbid {

// Deterministic random stream. All draws are derived from the raw 64-bit
// engine output through fixed arithmetic, so sequences are reproducible
// bit-exactly for a given (seed, stream) pair.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform_unit();

    // Uniform real on [lo, hi).
    double uniform_real(double lo, double hi);

    // Uniform integer on [lo, hi], inclusive. Unbiased.
    int uniform_int(int lo, int hi);

    // Consumes exactly one draw regardless of p.
    bool bernoulli(double p);

private:
    std::mt19937_64 engine_;
};

// Derives a fresh master seed from (seed, salt); used to decorrelate
// validation runs and sweep cells from the training stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// The named streams used by one simulation run: demand arrivals, policy bid
// noise, and sharing-flag assignment. Keeping them separate lets a sweep vary
// one source of randomness while holding the others fixed.
struct RngStreams {
    Rng arrivals;
    Rng bids;
    Rng sharing;

    explicit RngStreams(std::uint64_t master_seed)
        : arrivals(master_seed, 0), bids(master_seed, 1), sharing(master_seed, 2) {}
};

}  // namespace spotbid
