#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace imab {

using Permutation = std::vector<std::size_t>;

// Seeded stream with a pinned output definition so that seeds reproduce across platforms:
// raw draws come from std::mt19937_64, integers in [0, n) use rejection on the full 64-bit draw,
// and doubles use the top 53 bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n);

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

// Fisher-Yates from the identity: for i = k-1 down to 1, swap slot i with slot rng.below(i+1).
Permutation shuffled_permutation(std::size_t k, Rng& rng);

Permutation identity_permutation(std::size_t k);

bool is_permutation_of(const Permutation& perm, std::size_t k);

}  // namespace imab
