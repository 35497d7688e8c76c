#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "korobov.hpp"
#include "lattice.hpp"

namespace randlat {

enum class MeritMethod { closed_form, truncated_oracle };

struct MeritResult {
    double value = 0.0;
    MeritMethod method = MeritMethod::closed_form;
    double tail_bound = 0.0;  // 0 for closed_form
};

// Bernoulli polynomial B_beta on [0,1), beta in {2,4,6} (hard-coded).
double bernoulli_even(int beta, double x);

// P_{beta,gamma}(p,z) by the periodic-kernel identity
//   -1 + (1/p) sum_k prod_j (1 + gamma_j c_beta B_beta({k z_j / p})),
// exact up to rounding; beta must be 2, 4 or 6. O(p d).
MeritResult p_merit_closed(const LatticeRule& rule, int beta, const Weights& w);

// Truncated dual sum over [-trunc,trunc]^d, any beta > 1, trunc >= p.
// tail_bound comes from per-coordinate truncated sums plus integral tails
// and rigorously covers everything outside the box, so
// [value, value + tail_bound] contains the exact P.
MeritResult p_merit_oracle(const LatticeRule& rule, double beta, const Weights& w,
                           int64_t trunc, uint64_t budget = 2'000'000'000ULL);

// Dispatch: closed form for beta in {2,4,6}, otherwise the oracle.
MeritResult p_merit(const LatticeRule& rule, double beta, const Weights& w,
                    int64_t oracle_trunc = 4096);

// e^wor = sqrt(P_{2 alpha, gamma^2}(p,z)).
double worst_case_error(const LatticeRule& rule, const SpaceParams& space,
                        int64_t oracle_trunc = 4096);

struct DualVector {
    std::vector<int64_t> h;
    double r;
};

// All nonzero dual vectors with r_{alpha,gamma}(h) <= r_bound, complete
// within the box implied by r_bound. Requires alpha > 0.
std::vector<DualVector> enumerate_dual(const LatticeRule& rule, double r_bound,
                                       const SpaceParams& space,
                                       uint64_t budget = 200'000'000ULL);

// Weighted Zaremba index: exact minimum of r over the nonzero dual lattice.
double rho_index(const LatticeRule& rule, const SpaceParams& space,
                 uint64_t search_cap = 200'000'000ULL);

// Exact #{z in {1:p-1}^d : h.z = 0 mod p} (closed form, not enumeration).
uint64_t divisor_count(uint64_t p, std::span<const int64_t> h);

struct OmegaResult {
    double value = 0.0;
    bool exact = true;       // false when estimated by sampling
    double std_error = 0.0;  // reported for the sampled estimate
};

// omega_n(h): probability that h lies in the dual lattice of the randomly
// drawn rule, averaged over p in the modulus pool and z in the accepted set
// given by `in_z`. Exact enumeration while (p-1)^d <= exact_budget per
// prime, otherwise a flagged Monte Carlo estimate with mc_samples draws.
OmegaResult omega_weight(uint64_t n, std::span<const int64_t> h, const SpaceParams& space,
                         const std::function<bool(const LatticeRule&)>& in_z,
                         uint64_t exact_budget = 1'000'000,
                         uint64_t mc_samples = 200'000, uint64_t mc_seed = 1);

namespace detail {

// Visit every nonzero h with |h_j| <= box[j] and h.z = 0 (mod p). The free
// coordinates are iterated and the congruence is solved for the last one.
// `visit` receives the candidate vector. Throws budget_error when more than
// `budget` candidates/steps would be examined.
void for_each_dual(uint64_t p, std::span<const uint64_t> z, std::span<const int64_t> box,
                   uint64_t budget, const std::function<void(std::span<const int64_t>)>& visit);

uint64_t mod_inverse(uint64_t a, uint64_t p);

}  // namespace detail

}  // namespace randlat
