#include "merit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "errors.hpp"
#include "primes.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace randlat {

double bernoulli_even(int beta, double x) {
    switch (beta) {
        case 2:
            return x * x - x + 1.0 / 6.0;
        case 4:
            return ((x - 2.0) * x + 1.0) * x * x - 1.0 / 30.0;
        case 6: {
            const double x2 = x * x;
            return ((x2 - 3.0 * x + 2.5) * x2 - 0.5) * x2 * x + 1.0 / 42.0;
        }
        default:
            throw unsupported_error("bernoulli_even: beta must be 2, 4 or 6");
    }
}

namespace {

// c_beta = (-1)^{beta/2+1} (2 pi)^beta / beta!
double kernel_coefficient(int beta) {
    const double twopi = 2.0 * std::numbers::pi;
    switch (beta) {
        case 2:
            return twopi * twopi / 2.0;
        case 4:
            return -std::pow(twopi, 4) / 24.0;
        case 6:
            return std::pow(twopi, 6) / 720.0;
        default:
            throw unsupported_error("kernel_coefficient: beta must be 2, 4 or 6");
    }
}

bool near_even_kernel_beta(double beta, int& out) {
    for (int b : {2, 4, 6}) {
        if (std::abs(beta - b) < 1e-9) {
            out = b;
            return true;
        }
    }
    return false;
}

}  // namespace

MeritResult p_merit_closed(const LatticeRule& rule, int beta, const Weights& w) {
    if (beta != 2 && beta != 4 && beta != 6)
        throw unsupported_error("p_merit_closed: beta must be 2, 4 or 6");
    if (w.size() < rule.dim())
        throw std::invalid_argument("p_merit_closed: not enough weights");
    const double c = kernel_coefficient(beta);
    const uint64_t p = rule.p();
    KahanSum acc;
    for (uint64_t k = 0; k < p; ++k) {
        double prod = 1.0;
        for (int j = 0; j < rule.dim(); ++j) {
            const double frac =
                static_cast<double>(k * rule.z()[static_cast<size_t>(j)] % p) / static_cast<double>(p);
            prod *= 1.0 + w.at(j) * c * bernoulli_even(beta, frac);
        }
        acc.add(prod);
    }
    return {acc.value() / static_cast<double>(p) - 1.0, MeritMethod::closed_form, 0.0};
}

namespace detail {

uint64_t mod_inverse(uint64_t a, uint64_t p) {
    // Fermat: a^(p-2) mod p, p prime
    uint64_t result = 1, base = a % p, exp = p - 2;
    while (exp > 0) {
        if (exp & 1) result = static_cast<uint64_t>((static_cast<__uint128_t>(result) * base) % p);
        base = static_cast<uint64_t>((static_cast<__uint128_t>(base) * base) % p);
        exp >>= 1;
    }
    return result;
}

void for_each_dual(uint64_t p, std::span<const uint64_t> z, std::span<const int64_t> box,
                   uint64_t budget, const std::function<void(std::span<const int64_t>)>& visit) {
    const int d = static_cast<int>(z.size());
    for (int64_t b : box) {
        if (b < 0) return;  // empty box
    }
    const uint64_t zinv = mod_inverse(z[static_cast<size_t>(d - 1)], p);
    std::vector<int64_t> h(static_cast<size_t>(d), 0);
    uint64_t steps = 0;
    auto spend = [&](uint64_t k) {
        steps += k;
        if (steps > budget) throw budget_error("for_each_dual: enumeration budget exceeded");
    };

    auto rec = [&](auto&& self, int j, uint64_t partial) -> void {
        if (j == d - 1) {
            // h_last * z_last = -partial (mod p)
            const uint64_t target = (p - partial % p) % p;
            const uint64_t t = static_cast<uint64_t>(
                (static_cast<__uint128_t>(target) * zinv) % p);
            const int64_t bound = box[static_cast<size_t>(j)];
            // smallest value >= -bound congruent to t mod p
            const int64_t tt = static_cast<int64_t>(t);
            const int64_t k0 = (tt + bound) / static_cast<int64_t>(p);
            for (int64_t v = tt - k0 * static_cast<int64_t>(p); v <= bound;
                 v += static_cast<int64_t>(p)) {
                spend(1);
                h[static_cast<size_t>(j)] = v;
                bool zero = true;
                for (int64_t c : h) {
                    if (c != 0) {
                        zero = false;
                        break;
                    }
                }
                if (!zero) visit(h);
            }
            return;
        }
        const int64_t bound = box[static_cast<size_t>(j)];
        for (int64_t v = -bound; v <= bound; ++v) {
            spend(1);
            h[static_cast<size_t>(j)] = v;
            const uint64_t res = static_cast<uint64_t>(((v % static_cast<int64_t>(p)) +
                                                        static_cast<int64_t>(p)) %
                                                       static_cast<int64_t>(p));
            const uint64_t contrib = static_cast<uint64_t>(
                (static_cast<__uint128_t>(res) * z[static_cast<size_t>(j)]) % p);
            self(self, j + 1, (partial + contrib) % p);
        }
    };
    rec(rec, 0, 0);
}

}  // namespace detail

MeritResult p_merit_oracle(const LatticeRule& rule, double beta, const Weights& w,
                           int64_t trunc, uint64_t budget) {
    if (!(beta > 1.0)) throw std::invalid_argument("p_merit_oracle: beta must be > 1");
    if (trunc < static_cast<int64_t>(rule.p()))
        throw std::invalid_argument("p_merit_oracle: trunc must be >= p");
    if (w.size() < rule.dim())
        throw std::invalid_argument("p_merit_oracle: not enough weights");

    const int d = rule.dim();
    KahanSum acc;
    std::vector<int64_t> box(static_cast<size_t>(d), trunc);
    detail::for_each_dual(rule.p(), rule.z(), box, budget,
                          [&](std::span<const int64_t> h) {
                              double r = 1.0;
                              for (int j = 0; j < d; ++j) r *= r_value(beta, w.at(j), h[static_cast<size_t>(j)]);
                              acc.add(1.0 / r);
                          });

    // everything outside the box is covered by the full-lattice tail
    double boxed = 1.0, padded = 1.0;
    for (int j = 0; j < d; ++j) {
        KahanSum s;
        for (int64_t hh = 1; hh <= trunc; ++hh)
            s.add(std::pow(static_cast<double>(hh), -beta));
        const double truncated = 1.0 + 2.0 * w.at(j) * s.value();
        const double tail =
            2.0 * w.at(j) * std::pow(static_cast<double>(trunc), 1.0 - beta) / (beta - 1.0);
        boxed *= truncated;
        padded *= truncated + tail;
    }
    return {acc.value(), MeritMethod::truncated_oracle, padded - boxed};
}

MeritResult p_merit(const LatticeRule& rule, double beta, const Weights& w, int64_t oracle_trunc) {
    int b = 0;
    if (near_even_kernel_beta(beta, b)) return p_merit_closed(rule, b, w);
    return p_merit_oracle(rule, beta, w, std::max<int64_t>(oracle_trunc, static_cast<int64_t>(rule.p())));
}

double worst_case_error(const LatticeRule& rule, const SpaceParams& space, int64_t oracle_trunc) {
    const Weights squared = space.weights.prefix(space.d).squared();
    const MeritResult m = p_merit(rule, 2.0 * space.alpha, squared, oracle_trunc);
    return std::sqrt(std::max(0.0, m.value));
}

std::vector<DualVector> enumerate_dual(const LatticeRule& rule, double r_bound,
                                       const SpaceParams& space, uint64_t budget) {
    if (space.alpha <= 0.0)
        throw unsupported_error("enumerate_dual: alpha = 0 makes the box unbounded");
    if (!(r_bound >= 1.0)) return {};
    if (space.d != rule.dim())
        throw std::invalid_argument("enumerate_dual: dimension mismatch");

    std::vector<int64_t> box(static_cast<size_t>(space.d));
    for (int j = 0; j < space.d; ++j) {
        // largest |h_j| admissible given every other factor is >= 1
        int64_t m = static_cast<int64_t>(
            std::floor(std::pow(r_bound * space.weights.at(j), 1.0 / space.alpha)));
        if (m < 0) m = 0;
        while (m > 0 && r_value(space.alpha, space.weights.at(j), m) > r_bound) --m;
        while (r_value(space.alpha, space.weights.at(j), m + 1) <= r_bound) ++m;
        box[static_cast<size_t>(j)] = m;
    }

    std::vector<DualVector> out;
    detail::for_each_dual(rule.p(), rule.z(), box, budget,
                          [&](std::span<const int64_t> h) {
                              const double r = r_vector(space, h);
                              if (r <= r_bound)
                                  out.push_back({std::vector<int64_t>(h.begin(), h.end()), r});
                          });
    return out;
}

double rho_index(const LatticeRule& rule, const SpaceParams& space, uint64_t search_cap) {
    if (space.alpha <= 0.0)
        throw unsupported_error("rho_index: requires alpha > 0");
    if (space.d != rule.dim())
        throw std::invalid_argument("rho_index: dimension mismatch");

    const double p = static_cast<double>(rule.p());
    // (p, 0, ..., 0) is always dual; every dual vector below this r lies in
    // the box it implies, so one bounded sweep returns the exact minimum.
    double best = std::pow(p, space.alpha) / space.weights.at(0);
    if (space.d == 1) return best;

    const int d = space.d;
    const uint64_t zinv = detail::mod_inverse(rule.z()[static_cast<size_t>(d - 1)], rule.p());
    uint64_t steps = 0;
    auto spend = [&]() {
        if (++steps > search_cap) throw budget_error("rho_index: search cap exceeded");
    };

    std::vector<int64_t> h(static_cast<size_t>(d), 0);
    // free coordinates scan outward from zero so the running best prunes
    // whole subtrees as soon as the prefix alone reaches it
    auto rec = [&](auto&& self, int j, double prefix, uint64_t partial) -> void {
        if (j == d - 1) {
            const uint64_t target = (rule.p() - partial % rule.p()) % rule.p();
            const uint64_t t = static_cast<uint64_t>(
                (static_cast<__uint128_t>(target) * zinv) % rule.p());
            // progression t, t +- p, ... restricted by the current best
            const double cap = best * space.weights.at(j) / prefix;
            int64_t bound = static_cast<int64_t>(std::floor(std::pow(std::max(cap, 1.0), 1.0 / space.alpha))) + 1;
            const int64_t tt = static_cast<int64_t>(t);
            const int64_t k0 = (tt + bound) / static_cast<int64_t>(rule.p());
            for (int64_t v = tt - k0 * static_cast<int64_t>(rule.p()); v <= bound;
                 v += static_cast<int64_t>(rule.p())) {
                spend();
                bool zero = (v == 0);
                if (zero) {
                    for (int i = 0; i < d - 1; ++i) zero = zero && h[static_cast<size_t>(i)] == 0;
                }
                if (zero) continue;
                const double r = prefix * r_value(space.alpha, space.weights.at(j), v);
                if (r < best) best = r;
            }
            return;
        }
        for (int64_t mag = 0;; ++mag) {
            const double factor = r_value(space.alpha, space.weights.at(j), mag);
            if (mag > 0 && prefix * factor >= best) break;  // outward values only grow r
            for (int sgn = 0; sgn < (mag == 0 ? 1 : 2); ++sgn) {
                const int64_t v = sgn == 0 ? mag : -mag;
                spend();
                h[static_cast<size_t>(j)] = v;
                const uint64_t res = static_cast<uint64_t>(
                    ((v % static_cast<int64_t>(rule.p())) + static_cast<int64_t>(rule.p())) %
                    static_cast<int64_t>(rule.p()));
                const uint64_t contrib = static_cast<uint64_t>(
                    (static_cast<__uint128_t>(res) * rule.z()[static_cast<size_t>(j)]) % rule.p());
                self(self, j + 1, prefix * factor, (partial + contrib) % rule.p());
            }
            if (mag > 0 && prefix * factor >= best) break;
        }
        h[static_cast<size_t>(j)] = 0;
    };
    rec(rec, 0, 1.0, 0);
    return best;
}

uint64_t divisor_count(uint64_t p, std::span<const int64_t> h) {
    if (!is_prime(p)) throw std::invalid_argument("divisor_count: p must be prime");
    if (h.empty()) throw std::invalid_argument("divisor_count: empty h");
    const int d = static_cast<int>(h.size());
    int m = 0;  // coordinates with h_j != 0 mod p
    for (int64_t hj : h) {
        const int64_t r = ((hj % static_cast<int64_t>(p)) + static_cast<int64_t>(p)) %
                          static_cast<int64_t>(p);
        if (r != 0) ++m;
    }
    // #solutions = (p-1)^(d-m) * ((p-1)^m + (-1)^m (p-1)) / p
    auto checked_pow = [&](int e) -> __uint128_t {
        __uint128_t v = 1;
        for (int i = 0; i < e; ++i) {
            v *= p - 1;
            if (v > static_cast<__uint128_t>(UINT64_MAX) * p)
                throw std::overflow_error("divisor_count: count exceeds 64 bits");
        }
        return v;
    };
    const __uint128_t freely = checked_pow(d - m);
    if (m == 0) return static_cast<uint64_t>(freely);
    const __uint128_t pw = checked_pow(m);
    const __uint128_t core = (m % 2 == 0) ? (pw + (p - 1)) / p : (pw - (p - 1)) / p;
    const __uint128_t result = freely * core;
    if (result > UINT64_MAX) throw std::overflow_error("divisor_count: count exceeds 64 bits");
    return static_cast<uint64_t>(result);
}

OmegaResult omega_weight(uint64_t n, std::span<const int64_t> h, const SpaceParams& space,
                         const std::function<bool(const LatticeRule&)>& in_z,
                         uint64_t exact_budget, uint64_t mc_samples, uint64_t mc_seed) {
    if (n < 2) throw std::invalid_argument("omega_weight: n must be >= 2");
    bool all_zero = true;
    for (int64_t c : h) all_zero = all_zero && c == 0;
    if (all_zero) throw std::invalid_argument("omega_weight: h must be nonzero");
    if (static_cast<int>(h.size()) != space.d)
        throw std::invalid_argument("omega_weight: dimension mismatch");
    if (!in_z) throw std::invalid_argument("omega_weight: missing Z membership predicate");

    const auto primes = modulus_pool(n);
    if (primes.empty()) throw std::invalid_argument("omega_weight: empty modulus pool");

    auto dual_hit = [&](uint64_t p, std::span<const uint64_t> z) {
        uint64_t sum = 0;
        for (size_t j = 0; j < z.size(); ++j) {
            const uint64_t res = static_cast<uint64_t>(
                ((h[j] % static_cast<int64_t>(p)) + static_cast<int64_t>(p)) %
                static_cast<int64_t>(p));
            sum = (sum + static_cast<uint64_t>((static_cast<__uint128_t>(res) * z[j]) % p)) % p;
        }
        return sum == 0;
    };

    KahanSum total;
    bool exact = true;
    double var_accum = 0.0;
    for (uint64_t p : primes) {
        double cells = 1.0;
        for (int j = 0; j < space.d; ++j) cells *= static_cast<double>(p - 1);
        if (cells <= static_cast<double>(exact_budget)) {
            // full enumeration of {1:p-1}^d
            uint64_t members = 0, hits = 0;
            std::vector<uint64_t> z(static_cast<size_t>(space.d), 1);
            bool done = false;
            while (!done) {
                LatticeRule rule(p, z);
                if (in_z(rule)) {
                    ++members;
                    if (dual_hit(p, z)) ++hits;
                }
                int j = space.d - 1;
                while (j >= 0) {
                    if (++z[static_cast<size_t>(j)] < p) break;
                    z[static_cast<size_t>(j)] = 1;
                    --j;
                }
                if (j < 0) done = true;
            }
            if (members == 0) throw std::runtime_error("omega_weight: accepted set is empty");
            total.add(static_cast<double>(hits) / static_cast<double>(members));
        } else {
            // flagged Monte Carlo fallback over the accepted set
            exact = false;
            RngStream rng(mc_seed, p);
            uint64_t members = 0, hits = 0;
            std::vector<uint64_t> z(static_cast<size_t>(space.d));
            for (uint64_t s = 0; s < mc_samples; ++s) {
                for (auto& zj : z) zj = 1 + rng.next_below(p - 1);
                LatticeRule rule(p, z);
                if (!in_z(rule)) continue;
                ++members;
                if (dual_hit(p, z)) ++hits;
            }
            if (members == 0) throw std::runtime_error("omega_weight: no accepted samples");
            const double q = static_cast<double>(hits) / static_cast<double>(members);
            total.add(q);
            var_accum += q * (1.0 - q) / static_cast<double>(members);
        }
    }
    const double scale = 1.0 / static_cast<double>(primes.size());
    return {total.value() * scale, exact, std::sqrt(var_accum) * scale};
}

}  // namespace randlat
