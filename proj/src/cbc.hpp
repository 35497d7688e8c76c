#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "korobov.hpp"

namespace randlat {

struct CbcResult {
    std::vector<uint64_t> z;
    std::vector<double> merit_per_dim;  // P_{2a,g^2} of each prefix

    nlohmann::json to_json() const;
};

// Greedy coordinate-by-coordinate minimization of P_{2 alpha, gamma^2}(p, .),
// one coordinate at a time, ties broken towards the smallest candidate.
// Plain O(p^2 d); requires 2*alpha in {2,4,6}.
CbcResult cbc_construct(uint64_t p, int d, const SpaceParams& space);

}  // namespace randlat
