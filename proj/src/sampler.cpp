#include "sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "errors.hpp"
#include "merit.hpp"
#include "primes.hpp"

namespace randlat {

PrimeRange sieve_primes(uint64_t n) {
    if (n < 2) throw std::invalid_argument("sieve_primes: n must be >= 2");
    return {n, modulus_pool(n)};
}

double rho_threshold_single(uint64_t p, const SpaceParams& space, double lambda, double tau) {
    if (!(lambda > 0.0) || !(lambda < space.alpha))
        throw std::invalid_argument("rho_threshold_single: lambda must lie in (0, alpha)");
    if (!(tau > 0.0) || !(tau < 1.0))
        throw std::invalid_argument("rho_threshold_single: tau must lie in (0,1)");
    const double beta = space.alpha / lambda;
    const Weights raised = space.weights.prefix(space.d).pow(1.0 / lambda);
    const double v = v_d(beta, raised, space.d);
    return std::pow((1.0 - tau) * static_cast<double>(p) / v, lambda);
}

double rho_threshold_full(uint64_t p, const SpaceParams& space, double tau) {
    if (space.alpha <= 0.0)
        throw std::invalid_argument("rho_threshold_full: requires alpha > 0");
    // coarse scan of lambda in (0, alpha), then golden-section refinement
    // around the best bracket; t(lambda) is smooth and single-peaked here
    constexpr int kGrid = 64;
    double best = 0.0;
    int best_i = 1;
    for (int i = 1; i <= kGrid; ++i) {
        const double lam = space.alpha * static_cast<double>(i) / (kGrid + 1);
        const double t = rho_threshold_single(p, space, lam, tau);
        if (t > best) {
            best = t;
            best_i = i;
        }
    }
    double lo = space.alpha * static_cast<double>(best_i - 1) / (kGrid + 1);
    double hi = space.alpha * static_cast<double>(best_i + 1) / (kGrid + 1);
    lo = std::max(lo, 1e-6 * space.alpha);
    hi = std::min(hi, (1.0 - 1e-9) * space.alpha);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = rho_threshold_single(p, space, x1, tau);
    double f2 = rho_threshold_single(p, space, x2, tau);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = rho_threshold_single(p, space, x2, tau);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = rho_threshold_single(p, space, x1, tau);
        }
    }
    return std::max(best, std::max(f1, f2));
}

namespace {

// accept iff no nonzero dual vector has r strictly below the threshold
bool rho_at_least(const LatticeRule& rule, const SpaceParams& space, double threshold) {
    if (threshold <= 1.0) return true;  // r >= 1 on the whole lattice
    const auto dual = enumerate_dual(rule, threshold, space);
    for (const auto& v : dual) {
        if (v.r < threshold) return false;
    }
    return true;
}

}  // namespace

bool in_zp_single(const LatticeRule& rule, const SpaceParams& space, double lambda, double tau) {
    return rho_at_least(rule, space, rho_threshold_single(rule.p(), space, lambda, tau));
}

bool in_zp(const LatticeRule& rule, const SpaceParams& space, double tau) {
    return rho_at_least(rule, space, rho_threshold_full(rule.p(), space, tau));
}

GoodVectorCriterion GoodVectorCriterion::make(uint64_t p, const SpaceParams& space,
                                              double lambda, double tau) {
    if (!(lambda > 0.0) || !(lambda < space.alpha))
        throw std::invalid_argument("GoodVectorCriterion: lambda must lie in (0, alpha)");
    if (!(tau > 0.0) || !(tau < 1.0))
        throw std::invalid_argument("GoodVectorCriterion: tau must lie in (0,1)");
    GoodVectorCriterion c;
    c.lambda = lambda;
    c.tau = tau;
    c.rho_threshold = rho_threshold_single(p, space, lambda, tau);
    const double beta = space.alpha / lambda;
    for (int b : {2, 4, 6}) {
        if (std::abs(beta - b) < 1e-9) {
            c.closed_form_beta = b;
            const Weights raised = space.weights.prefix(space.d).pow(1.0 / lambda);
            c.merit_threshold =
                v_d(static_cast<double>(b), raised, space.d) /
                ((1.0 - tau) * static_cast<double>(p));
        }
    }
    return c;
}

bool GoodVectorCriterion::accepts(const LatticeRule& rule, const SpaceParams& space) const {
    if (closed_form_beta != 0) {
        const Weights raised = space.weights.prefix(space.d).pow(1.0 / lambda);
        return p_merit_closed(rule, closed_form_beta, raised).value <= merit_threshold;
    }
    return rho_at_least(rule, space, rho_threshold);
}

bool acceptance_test(uint64_t p, std::span<const uint64_t> z, const SpaceParams& space,
                     double lambda, double tau) {
    LatticeRule rule(p, std::vector<uint64_t>(z.begin(), z.end()));
    return GoodVectorCriterion::make(p, space, lambda, tau).accepts(rule, space);
}

DrawRecord draw_with_membership(uint64_t n, const SpaceParams& space,
                                const AlgorithmParams& alg, RngStream& rng, bool shifted,
                                const std::function<bool(const LatticeRule&)>& member) {
    if (n < 4) throw std::invalid_argument("draw: n must be >= 4");
    if (alg.try_cap < 1) throw std::invalid_argument("draw: try_cap must be >= 1");
    const PrimeRange pool = sieve_primes(n);
    if (pool.primes.empty()) throw std::runtime_error("draw: empty modulus pool");

    DrawRecord rec;
    rec.n = n;
    rec.seed = rng.stream_id();
    rec.p = pool.primes[rng.next_below(pool.primes.size())];

    std::vector<uint64_t> z(static_cast<size_t>(space.d));
    bool accepted = false;
    int tries = 0;
    while (tries < alg.try_cap) {
        ++tries;
        for (auto& zj : z) zj = 1 + rng.next_below(rec.p - 1);
        LatticeRule candidate(rec.p, z);
        if (!member || member(candidate)) {
            accepted = true;
            break;
        }
    }
    rec.tries = tries;
    if (!accepted)
        throw draw_error("draw: no accepted generating vector within the try cap", tries);
    rec.z = z;

    if (shifted) {
        std::vector<double> u(static_cast<size_t>(space.d));
        for (auto& uj : u) uj = rng.next_double();
        rec.shift = std::move(u);
    }
    return rec;
}

DrawRecord draw(uint64_t n, const SpaceParams& space, const AlgorithmParams& alg,
                RngStream& rng, bool shifted, ZpMode mode) {
    if (space.alpha == 0.0) {
        // no good-vector criterion applies; every z is accepted
        return draw_with_membership(n, space, alg, rng, shifted, {});
    }
    if (mode == ZpMode::relaxed) {
        alg.validate(space.alpha, shifted);
        GoodVectorCriterion criterion;
        uint64_t criterion_p = 0;
        return draw_with_membership(n, space, alg, rng, shifted, [&](const LatticeRule& r) {
            if (r.p() != criterion_p) {
                criterion = GoodVectorCriterion::make(r.p(), space, alg.lambda, alg.tau);
                criterion_p = r.p();
            }
            return criterion.accepts(r, space);
        });
    }
    // full Z_p: the rho bound enforced for all lambda. The threshold only
    // depends on p, so compute it once for the drawn modulus.
    double threshold = -1.0;
    uint64_t threshold_p = 0;
    return draw_with_membership(n, space, alg, rng, shifted, [&](const LatticeRule& r) {
        if (r.p() != threshold_p) {
            threshold = rho_threshold_full(r.p(), space, alg.tau);
            threshold_p = r.p();
        }
        return rho_at_least(r, space, threshold);
    });
}

IntegrateResult integrate_once(const Integrand& f, uint64_t n, const SpaceParams& space,
                               const AlgorithmParams& alg, RngStream& rng, bool shifted,
                               ZpMode mode) {
    DrawRecord rec = draw(n, space, alg, rng, shifted, mode);
    LatticeRule rule(rec.p, rec.z);
    std::complex<double> estimate;
    if (shifted) {
        estimate = rule.apply_shifted(Shift(*rec.shift), f);
    } else {
        estimate = rule.apply(f);
    }
    return {estimate, std::move(rec)};
}

}  // namespace randlat
