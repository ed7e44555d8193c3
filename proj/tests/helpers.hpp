#pragma once

#include <cmath>
#include <vector>

#include "imab/instances.hpp"
#include "imab/random.hpp"

namespace test {

// Random valid instance with 2..max_k arms and horizon 2..max_t.
inline imab::Instance random_instance(imab::Rng& rng, std::size_t max_k, imab::Pulls max_t) {
    const auto k = static_cast<std::size_t>(2 + rng.below(max_k - 1));
    const auto t = static_cast<imab::Pulls>(2 + rng.below(static_cast<std::uint64_t>(max_t - 1)));
    return imab::make_random_concave(k, t, rng);
}

inline std::vector<double> values_of(const imab::RewardCurve& curve) {
    std::vector<double> out{0.0};
    for (double v : curve.table_values()) out.push_back(v);
    return out;
}

}  // namespace test
