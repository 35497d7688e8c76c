#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "merit.hpp"
#include "rng.hpp"

using namespace randlat;

namespace {
constexpr double kPi = std::numbers::pi;

// brute-force dual sum over an explicit box, independent of the library's
// congruence-solving enumeration
double brute_dual_sum(const LatticeRule& rule, double beta, const Weights& w, int64_t box) {
    const int d = rule.dim();
    std::vector<int64_t> h(static_cast<size_t>(d), -box);
    double total = 0.0;
    bool done = false;
    while (!done) {
        int64_t dot = 0;
        bool zero = true;
        for (int j = 0; j < d; ++j) {
            dot += h[static_cast<size_t>(j)] * static_cast<int64_t>(rule.z()[static_cast<size_t>(j)]);
            zero = zero && h[static_cast<size_t>(j)] == 0;
        }
        const int64_t p = static_cast<int64_t>(rule.p());
        if (!zero && ((dot % p) + p) % p == 0) {
            double r = 1.0;
            for (int j = 0; j < d; ++j) r *= r_value(beta, w.at(j), h[static_cast<size_t>(j)]);
            total += 1.0 / r;
        }
        int j = d - 1;
        while (j >= 0) {
            if (++h[static_cast<size_t>(j)] <= box) break;
            h[static_cast<size_t>(j)] = -box;
            --j;
        }
        if (j < 0) done = true;
    }
    return total;
}

}  // namespace

TEST_CASE("Bernoulli kernels") {
    CHECK(bernoulli_even(2, 0.0) == doctest::Approx(1.0 / 6.0));
    CHECK(bernoulli_even(2, 0.5) == doctest::Approx(-1.0 / 12.0));
    CHECK(bernoulli_even(4, 0.0) == doctest::Approx(-1.0 / 30.0));
    CHECK(bernoulli_even(4, 0.5) == doctest::Approx(7.0 / 240.0));
    CHECK(bernoulli_even(6, 0.0) == doctest::Approx(1.0 / 42.0));
    CHECK_THROWS_AS(bernoulli_even(3, 0.5), unsupported_error);
}

TEST_CASE("closed-form merit values") {
    SUBCASE("p=3, z=1, beta=2: pi^2/27") {
        const auto m = p_merit_closed(LatticeRule(3, {1}), 2, Weights({1.0}));
        CHECK(m.value == doctest::Approx(kPi * kPi / 27.0).epsilon(1e-13));
        CHECK(m.method == MeritMethod::closed_form);
        CHECK(m.tail_bound == 0.0);
    }
    SUBCASE("p=2, z=1, beta=2: pi^2/12") {
        const auto m = p_merit_closed(LatticeRule(2, {1}), 2, Weights({1.0}));
        CHECK(m.value == doctest::Approx(kPi * kPi / 12.0).epsilon(1e-13));
    }
    SUBCASE("p=2, z=1, beta=4: pi^4/720") {
        const auto m = p_merit_closed(LatticeRule(2, {1}), 4, Weights({1.0}));
        CHECK(m.value == doctest::Approx(std::pow(kPi, 4) / 720.0).epsilon(1e-13));
    }
    SUBCASE("vanishing weights kill the merit") {
        const auto m = p_merit_closed(LatticeRule(5, {1, 2}), 2, Weights({1e-9, 1e-9}));
        CHECK(std::abs(m.value) < 1e-8);
    }
    SUBCASE("odd beta is unsupported") {
        CHECK_THROWS_AS(p_merit_closed(LatticeRule(3, {1}), 3, Weights({1.0})),
                        unsupported_error);
    }
    SUBCASE("matches the brute-force dual sum") {
        RngStream rng(3, 0);
        for (int t = 0; t < 12; ++t) {
            const uint64_t p = std::vector<uint64_t>{3, 5, 7, 11}[rng.next_below(4)];
            const int d = 1 + static_cast<int>(rng.next_below(2));
            std::vector<uint64_t> z(static_cast<size_t>(d));
            for (auto& zj : z) zj = 1 + rng.next_below(p - 1);
            const Weights w(d == 1 ? std::vector<double>{1.0} : std::vector<double>{1.0, 0.5});
            LatticeRule rule(p, z);
            const double closed = p_merit_closed(rule, 2, w).value;
            const double brute = brute_dual_sum(rule, 2.0, w, 2000);
            CHECK(closed == doctest::Approx(brute).epsilon(2e-3));
            CHECK(closed >= brute - 1e-12);  // the box sum can only miss mass
        }
    }
}

TEST_CASE("oracle merit brackets the closed form") {
    SUBCASE("truncated value sits just below pi^2/27") {
        const auto m = p_merit_oracle(LatticeRule(3, {1}), 2.0, Weights({1.0}), 100000);
        const double exact = kPi * kPi / 27.0;
        CHECK(m.method == MeritMethod::truncated_oracle);
        CHECK(m.value <= exact);
        CHECK(m.value >= exact - 1e-5);
        CHECK(exact <= m.value + m.tail_bound);
    }
    SUBCASE("p=2 beta=4 even-frequency sum") {
        const auto m = p_merit_oracle(LatticeRule(2, {1}), 4.0, Weights({1.0}), 1000);
        const double exact = std::pow(kPi, 4) / 720.0;  // zeta(4)/8
        CHECK(m.value <= exact);
        CHECK(exact <= m.value + m.tail_bound);
    }
    SUBCASE("interval holds on random instances") {
        RngStream rng(21, 0);
        for (int t = 0; t < 30; ++t) {
            const uint64_t p = std::vector<uint64_t>{3, 5, 7, 11, 13}[rng.next_below(5)];
            const int d = 1 + static_cast<int>(rng.next_below(3));
            std::vector<uint64_t> z(static_cast<size_t>(d));
            for (auto& zj : z) zj = 1 + rng.next_below(p - 1);
            std::vector<double> g;
            double prev = 1.0;
            for (int j = 0; j < d; ++j) {
                prev *= 0.4 + 0.6 * rng.next_double();
                g.push_back(prev);
            }
            const Weights w(g);
            const int beta = rng.next_below(2) == 0 ? 2 : 4;
            LatticeRule rule(p, z);
            const auto closed = p_merit_closed(rule, beta, w);
            const auto oracle = p_merit_oracle(rule, static_cast<double>(beta), w, 64);
            CHECK(closed.value >= oracle.value - 1e-11);
            CHECK(closed.value <= oracle.value + oracle.tail_bound + 1e-11);
        }
    }
    SUBCASE("trunc below p rejected") {
        CHECK_THROWS_AS(p_merit_oracle(LatticeRule(13, {2}), 2.0, Weights({1.0}), 5),
                        std::invalid_argument);
    }
    SUBCASE("non-even beta routes through the oracle in p_merit") {
        const auto m = p_merit(LatticeRule(5, {2}), 2.5, Weights({1.0}), 4096);
        CHECK(m.method == MeritMethod::truncated_oracle);
        CHECK(m.tail_bound > 0.0);
    }
}

TEST_CASE("worst-case error is the square root of the squared-weight merit") {
    SpaceParams s1(1, 1.0, Weights({1.0}));
    CHECK(worst_case_error(LatticeRule(3, {1}), s1) ==
          doctest::Approx(std::sqrt(kPi * kPi / 27.0)).epsilon(1e-13));
    CHECK(worst_case_error(LatticeRule(2, {1}), s1) ==
          doctest::Approx(std::sqrt(kPi * kPi / 12.0)).epsilon(1e-13));
    SpaceParams tiny(2, 1.0, Weights({1e-9, 1e-9}));
    CHECK(worst_case_error(LatticeRule(5, {1, 2}), tiny) < 1e-4);
}

TEST_CASE("dual enumeration is complete within its box") {
    SpaceParams s(2, 1.0, Weights({1.0, 1.0}));
    SUBCASE("p=5 z=(1,2): the r=2 shell") {
        const auto dual = enumerate_dual(LatticeRule(5, {1, 2}), 2.0, s);
        REQUIRE(dual.size() == 4);  // (1,2), (2,-1) and negations
        for (const auto& v : dual) CHECK(v.r == doctest::Approx(2.0));
        const auto has = [&](int64_t a, int64_t b) {
            return std::any_of(dual.begin(), dual.end(), [&](const DualVector& v) {
                return v.h[0] == a && v.h[1] == b;
            });
        };
        CHECK(has(1, 2));
        CHECK(has(2, -1));
        CHECK(has(-1, -2));
        CHECK(has(-2, 1));
    }
    SUBCASE("below the minimum the shell is empty") {
        CHECK(enumerate_dual(LatticeRule(5, {1, 2}), 1.5, s).empty());
    }
    SUBCASE("d=1: multiples of p") {
        SpaceParams s1(1, 1.0, Weights({1.0}));
        const auto dual = enumerate_dual(LatticeRule(2, {1}), 2.0, s1);
        REQUIRE(dual.size() == 2);
        CHECK(std::abs(dual[0].h[0]) == 2);
        CHECK(dual[0].r == doctest::Approx(2.0));
    }
    SUBCASE("alpha = 0 rejected") {
        SpaceParams s0(2, 0.0, Weights({1.0, 1.0}));
        CHECK_THROWS_AS(enumerate_dual(LatticeRule(5, {1, 2}), 2.0, s0), unsupported_error);
    }
    SUBCASE("budget error") {
        SpaceParams big(2, 1.0, Weights({1.0, 1.0}));
        CHECK_THROWS_AS(enumerate_dual(LatticeRule(5, {1, 2}), 1e6, big, 10), budget_error);
    }
}

TEST_CASE("Zaremba index") {
    SpaceParams s2(2, 1.0, Weights({1.0, 1.0}));
    CHECK(rho_index(LatticeRule(5, {1, 2}), s2) == doctest::Approx(2.0));
    CHECK(rho_index(LatticeRule(7, {1, 1}), s2) == doctest::Approx(1.0));
    SpaceParams s1(1, 1.0, Weights({1.0}));
    CHECK(rho_index(LatticeRule(2, {1}), s1) == doctest::Approx(2.0));

    SUBCASE("matches brute-force minimum on random rules") {
        RngStream rng(31, 0);
        for (int t = 0; t < 20; ++t) {
            const uint64_t p = std::vector<uint64_t>{5, 7, 11, 13}[rng.next_below(4)];
            const int d = 2 + static_cast<int>(rng.next_below(2));
            std::vector<uint64_t> z(static_cast<size_t>(d));
            for (auto& zj : z) zj = 1 + rng.next_below(p - 1);
            std::vector<double> g{1.0};
            for (int j = 1; j < d; ++j) g.push_back(g.back() * 0.8);
            SpaceParams s(d, 1.5, Weights(g));
            LatticeRule rule(p, z);
            const double rho = rho_index(rule, s);
            // brute force over a box that certainly contains the minimizer
            double best = 1e300;
            const int64_t box = 2 * static_cast<int64_t>(p);
            std::vector<int64_t> h(static_cast<size_t>(d), -box);
            bool done = false;
            while (!done) {
                int64_t dot = 0;
                bool zero = true;
                for (int j = 0; j < d; ++j) {
                    dot += h[static_cast<size_t>(j)] * static_cast<int64_t>(z[static_cast<size_t>(j)]);
                    zero = zero && h[static_cast<size_t>(j)] == 0;
                }
                const int64_t pp = static_cast<int64_t>(p);
                if (!zero && ((dot % pp) + pp) % pp == 0)
                    best = std::min(best, r_vector(s, h));
                int j = d - 1;
                while (j >= 0) {
                    if (++h[static_cast<size_t>(j)] <= box) break;
                    h[static_cast<size_t>(j)] = -box;
                    --j;
                }
                if (j < 0) done = true;
            }
            CHECK(rho == doctest::Approx(best).epsilon(1e-12));
        }
    }

    SUBCASE("Zaremba inequality 1/rho < P") {
        RngStream rng(37, 0);
        for (int t = 0; t < 15; ++t) {
            const uint64_t p = std::vector<uint64_t>{3, 5, 7, 11}[rng.next_below(4)];
            std::vector<uint64_t> z{1 + rng.next_below(p - 1), 1 + rng.next_below(p - 1)};
            SpaceParams s(2, 2.0, Weights({1.0, 0.5}));
            LatticeRule rule(p, z);
            const double rho = rho_index(rule, s);
            const double pv = p_merit_closed(rule, 4, Weights({1.0, 0.25})).value;
            // P_{2a,g^2} corresponds to alpha doubled; compare at matching index
            SpaceParams s4(2, 4.0, Weights({1.0, 0.25}));
            const double rho4 = rho_index(rule, s4);
            CHECK(1.0 / rho4 < pv);
            CHECK(rho4 == doctest::Approx(rho * rho).epsilon(1e-12));
        }
    }
}

TEST_CASE("divisor counts") {
    CHECK(divisor_count(5, std::vector<int64_t>{5, 10}) == 16);
    CHECK(divisor_count(5, std::vector<int64_t>{1, 2}) == 4);
    CHECK(divisor_count(3, std::vector<int64_t>{1}) == 0);
    CHECK(divisor_count(7, std::vector<int64_t>{-7, 14, 0}) == 216);  // 6^3
    CHECK_THROWS_AS(divisor_count(6, std::vector<int64_t>{1}), std::invalid_argument);

    // spot brute-force cross-check (the acceptance suite runs the full grid)
    for (uint64_t p : {3ULL, 5ULL}) {
        for (int64_t a = -4; a <= 4; ++a) {
            for (int64_t b = -4; b <= 4; ++b) {
                if (a == 0 && b == 0) continue;
                uint64_t brute = 0;
                for (uint64_t z1 = 1; z1 < p; ++z1)
                    for (uint64_t z2 = 1; z2 < p; ++z2) {
                        const int64_t dot = a * static_cast<int64_t>(z1) + b * static_cast<int64_t>(z2);
                        const int64_t pp = static_cast<int64_t>(p);
                        if (((dot % pp) + pp) % pp == 0) ++brute;
                    }
                CHECK(divisor_count(p, std::vector<int64_t>{a, b}) == brute);
            }
        }
    }
}

TEST_CASE("omega weight at n=10 (single prime 7)") {
    SpaceParams s(2, 2.0, Weights({1.0, 1.0}));
    const auto member = [](const LatticeRule&) { return true; };

    SUBCASE("h congruent to zero has omega 1") {
        const auto om = omega_weight(10, std::vector<int64_t>{7, 0}, s, member);
        CHECK(om.exact);
        CHECK(om.value == doctest::Approx(1.0));
    }
    SUBCASE("generic h has omega = divisor fraction") {
        const auto om = omega_weight(10, std::vector<int64_t>{1, 1}, s, member);
        CHECK(om.value == doctest::Approx(6.0 / 36.0));
    }
    SUBCASE("zero h rejected") {
        CHECK_THROWS_AS(omega_weight(10, std::vector<int64_t>{0, 0}, s, member),
                        std::invalid_argument);
    }
    SUBCASE("sampled fallback is flagged and close") {
        const auto exact = omega_weight(10, std::vector<int64_t>{1, 1}, s, member);
        const auto mc = omega_weight(10, std::vector<int64_t>{1, 1}, s, member,
                                     /*exact_budget=*/1, /*mc_samples=*/200000, /*mc_seed=*/9);
        CHECK_FALSE(mc.exact);
        CHECK(mc.std_error > 0.0);
        CHECK(std::abs(mc.value - exact.value) < 5.0 * mc.std_error + 1e-3);
    }
}
