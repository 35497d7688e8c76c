#include "cbc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "errors.hpp"
#include "merit.hpp"
#include "primes.hpp"
#include "util.hpp"

namespace randlat {

nlohmann::json CbcResult::to_json() const {
    return {{"z", z}, {"merit_per_dim", merit_per_dim}};
}

CbcResult cbc_construct(uint64_t p, int d, const SpaceParams& space) {
    if (!is_prime(p)) throw std::invalid_argument("cbc_construct: p must be prime");
    if (d < 1 || d > space.weights.size())
        throw std::invalid_argument("cbc_construct: bad dimension");
    int beta = 0;
    for (int b : {2, 4, 6}) {
        if (std::abs(2.0 * space.alpha - b) < 1e-9) beta = b;
    }
    if (beta == 0) throw unsupported_error("cbc_construct: requires 2*alpha in {2,4,6}");

    const double twopi = 2.0 * std::numbers::pi;
    double c;
    switch (beta) {
        case 2: c = twopi * twopi / 2.0; break;
        case 4: c = -std::pow(twopi, 4) / 24.0; break;
        default: c = std::pow(twopi, 6) / 720.0; break;
    }

    // kernel values 1 + g_j^2 c B_beta(k/p) depend on k only through the
    // residue, so one table per stage serves every candidate
    CbcResult result;
    std::vector<double> prod(p, 1.0);  // running product over chosen coords
    for (int s = 0; s < d; ++s) {
        const double g2 = space.weights.at(s) * space.weights.at(s);
        std::vector<double> kernel(p);
        for (uint64_t rsd = 0; rsd < p; ++rsd) {
            const double x = static_cast<double>(rsd) / static_cast<double>(p);
            kernel[rsd] = 1.0 + g2 * c * bernoulli_even(beta, x);
        }
        uint64_t best_z = 1;
        double best_merit = 0.0;
        bool first = true;
        for (uint64_t cand = 1; cand < p; ++cand) {
            KahanSum acc;
            for (uint64_t k = 0; k < p; ++k) acc.add(prod[k] * kernel[k * cand % p]);
            const double merit = acc.value() / static_cast<double>(p) - 1.0;
            if (first || merit < best_merit) {
                best_merit = merit;
                best_z = cand;
                first = false;
            }
        }
        for (uint64_t k = 0; k < p; ++k) prod[k] *= kernel[k * best_z % p];
        result.z.push_back(best_z);
        result.merit_per_dim.push_back(best_merit);
    }
    return result;
}

}  // namespace randlat
