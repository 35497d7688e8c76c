#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "korobov.hpp"
#include "lattice.hpp"
#include "rng.hpp"

namespace randlat {

struct PrimeRange {
    uint64_t n;
    std::vector<uint64_t> primes;  // sorted, each in [ceil(n/2)+1, n]
};

PrimeRange sieve_primes(uint64_t n);

// rho threshold of the relaxed good-vector set at one fixed lambda:
//   ((1-tau) p / V_d(alpha/lambda, gamma^(1/lambda)))^lambda
double rho_threshold_single(uint64_t p, const SpaceParams& space, double lambda,
                            double tau = 0.5);

// rho threshold of the full good-vector set: the supremum of the single-
// lambda thresholds over lambda in (0, alpha) (grid plus golden refinement).
double rho_threshold_full(uint64_t p, const SpaceParams& space, double tau = 0.5);

// z belongs to the relaxed set Z_{p,lambda}: no nonzero dual vector has
// r_{alpha,gamma} below the single-lambda threshold.
bool in_zp_single(const LatticeRule& rule, const SpaceParams& space, double lambda,
                  double tau = 0.5);

// z belongs to the full set Z_p: the rho bound holds for every lambda.
bool in_zp(const LatticeRule& rule, const SpaceParams& space, double tau = 0.5);

// Resolved single-lambda acceptance rule for one modulus: the merit form
// P_{alpha/lambda, gamma^(1/lambda)} <= V_d / ((1-tau) p) when alpha/lambda
// is 2, 4 or 6, the rho-threshold form otherwise. At least
// ceil(tau (p-1)^d) of all z pass either way.
struct GoodVectorCriterion {
    double lambda = 0.0;
    double tau = 0.5;
    double rho_threshold = 0.0;    // accept iff rho >= this (rho route)
    double merit_threshold = 0.0;  // accept iff P <= this (merit route)
    int closed_form_beta = 0;      // 2/4/6 when the merit route applies, else 0

    static GoodVectorCriterion make(uint64_t p, const SpaceParams& space, double lambda,
                                    double tau = 0.5);
    bool accepts(const LatticeRule& rule, const SpaceParams& space) const;
};

bool acceptance_test(uint64_t p, std::span<const uint64_t> z, const SpaceParams& space,
                     double lambda, double tau = 0.5);

// Which good-vector set the rejection loop targets.
enum class ZpMode {
    full,     // Z_p (bound for all lambda); the default draw
    relaxed,  // Z_{p,lambda} at the configured lambda
};

struct DrawRecord {
    uint64_t n = 0;
    uint64_t p = 0;
    std::vector<uint64_t> z;
    std::optional<std::vector<double>> shift;
    int tries = 1;
    uint64_t seed = 0;  // stream identifier
};

// One draw of the randomized lattice rule: p uniform over the modulus pool,
// z by rejection from the accepted set, then (optionally) a uniform shift.
DrawRecord draw(uint64_t n, const SpaceParams& space, const AlgorithmParams& alg,
                RngStream& rng, bool shifted, ZpMode mode = ZpMode::full);

// Same, with an arbitrary membership predicate (used for testing the
// rejection loop and for custom accepted sets).
DrawRecord draw_with_membership(uint64_t n, const SpaceParams& space,
                                const AlgorithmParams& alg, RngStream& rng, bool shifted,
                                const std::function<bool(const LatticeRule&)>& member);

struct IntegrateResult {
    std::complex<double> estimate;
    DrawRecord record;
};

// One realization of the randomized estimate (cost: at most n evaluations).
IntegrateResult integrate_once(const Integrand& f, uint64_t n, const SpaceParams& space,
                               const AlgorithmParams& alg, RngStream& rng, bool shifted,
                               ZpMode mode = ZpMode::full);

}  // namespace randlat
