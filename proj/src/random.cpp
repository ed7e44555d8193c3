#include "imab/random.hpp"

#include <limits>
#include <numeric>
#include <utility>

namespace imab {

std::uint64_t Rng::below(std::uint64_t n) {
    // Accept draws below the largest multiple of n that fits in 2^64; `limit` is its last value.
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % n + 1) % n;
    for (;;) {
        const std::uint64_t draw = engine_();
        if (draw <= limit) return draw % n;
    }
}

Permutation identity_permutation(std::size_t k) {
    Permutation perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    return perm;
}

Permutation shuffled_permutation(std::size_t k, Rng& rng) {
    Permutation perm = identity_permutation(k);
    for (std::size_t i = k; i-- > 1;) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

bool is_permutation_of(const Permutation& perm, std::size_t k) {
    if (perm.size() != k) return false;
    std::vector<bool> seen(k, false);
    for (auto index : perm) {
        if (index >= k || seen[index]) return false;
        seen[index] = true;
    }
    return true;
}

}  // namespace imab
