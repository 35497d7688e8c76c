#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <sstream>

#include "lattice.hpp"
#include "primes.hpp"
#include "rng.hpp"

using namespace randlat;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Integrand fourier_mode(std::vector<int64_t> h) {
    return [h = std::move(h)](std::span<const double> x) -> std::complex<double> {
        double phase = 0.0;
        for (size_t j = 0; j < h.size(); ++j) phase += static_cast<double>(h[j]) * x[j];
        phase *= kTwoPi;
        return {std::cos(phase), std::sin(phase)};
    };
}

}  // namespace

TEST_CASE("primality is exact") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(is_prime(7919));
    CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561));    // Carmichael
    CHECK_FALSE(is_prime(6601));   // Carmichael
    CHECK_FALSE(is_prime(7917));
}

TEST_CASE("rule construction enforces invariants") {
    CHECK_NOTHROW(LatticeRule(2, {1}));
    CHECK_THROWS_AS(LatticeRule(4, {1}), std::invalid_argument);    // composite
    CHECK_THROWS_AS(LatticeRule(5, {0}), std::invalid_argument);    // z out of range
    CHECK_THROWS_AS(LatticeRule(5, {5}), std::invalid_argument);
    CHECK_THROWS_AS(LatticeRule(5, {}), std::invalid_argument);
}

TEST_CASE("node sets match the fractional construction") {
    SUBCASE("p=2, z=(1)") {
        const auto pts = points(LatticeRule(2, {1}));
        REQUIRE(pts.size() == 2);
        CHECK(pts[0][0] == 0.0);
        CHECK(pts[1][0] == 0.5);
    }
    SUBCASE("p=3, z=(1,2)") {
        const auto pts = points(LatticeRule(3, {1, 2}));
        REQUIRE(pts.size() == 3);
        CHECK(pts[0] == std::vector<double>{0.0, 0.0});
        CHECK(pts[1] == std::vector<double>{1.0 / 3.0, 2.0 / 3.0});
        CHECK(pts[2] == std::vector<double>{2.0 / 3.0, 1.0 / 3.0});
    }
    SUBCASE("equal components sit on the diagonal") {
        const auto pts = points(LatticeRule(5, {1, 1}));
        REQUIRE(pts.size() == 5);
        for (const auto& x : pts) CHECK(x[0] == x[1]);
    }
    SUBCASE("node multiset is invariant under adding z/p") {
        LatticeRule rule(7, {1, 3});
        auto pts = points(rule);
        std::map<std::pair<double, double>, int> count;
        for (const auto& x : pts) count[{x[0], x[1]}]++;
        for (const auto& x : pts) {
            double a = x[0] + 1.0 / 7.0;
            double b = x[1] + 3.0 / 7.0;
            if (a >= 1.0) a -= 1.0;
            if (b >= 1.0) b -= 1.0;
            // snap to the exact grid values
            a = std::round(a * 7.0) / 7.0;
            b = std::round(b * 7.0) / 7.0;
            CHECK(count.count({a, b}) == 1);
        }
    }
}

TEST_CASE("apply averages exactly") {
    LatticeRule rule(7, {1, 3});
    SUBCASE("constants are integrated exactly") {
        const auto v = rule.apply([](std::span<const double>) {
            return std::complex<double>{1.0, 0.0};
        });
        CHECK(v.real() == 1.0);
        CHECK(v.imag() == 0.0);
    }
    SUBCASE("character sum collapses on the dual lattice") {
        // h.z = 3*1 + (-1)*3 = 0 mod 7
        const auto v = rule.apply(fourier_mode({3, -1}));
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(v.imag()) < 1e-12);
    }
    SUBCASE("character sum vanishes off the dual lattice") {
        const auto v = rule.apply(fourier_mode({1, 0}));
        CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("mean bound") {
        const auto v = rule.apply([](std::span<const double> x) {
            return std::complex<double>{std::sin(kTwoPi * x[0]) * x[1], 0.0};
        });
        CHECK(std::abs(v) <= 1.0);
    }
    SUBCASE("evaluator failures propagate") {
        const Integrand broken = [](std::span<const double>) -> std::complex<double> {
            throw std::runtime_error("integrand blew up");
        };
        CHECK_THROWS_AS(rule.apply(broken), std::runtime_error);
        CHECK_THROWS_AS(rule.apply_shifted(Shift(std::vector<double>{0.1, 0.2}), broken),
                        std::runtime_error);
    }
}

TEST_CASE("apply is linear") {
    LatticeRule rule(11, {2, 7});
    RngStream rng(5, 0);
    const auto f = fourier_mode({2, -3});
    const auto g = fourier_mode({5, 1});
    for (int t = 0; t < 10; ++t) {
        const double a = 2.0 * rng.next_double() - 1.0;
        const double b = 2.0 * rng.next_double() - 1.0;
        const auto combo = rule.apply([&](std::span<const double> x) {
            return a * f(x) + b * g(x);
        });
        const auto split = a * rule.apply(f) + b * rule.apply(g);
        CHECK(std::abs(combo - split) < 1e-12);
    }
}

TEST_CASE("shifted application") {
    LatticeRule rule(7, {1, 3});
    SUBCASE("zero shift equals apply") {
        const Shift zero(std::vector<double>{0.0, 0.0});
        const auto f = fourier_mode({2, 1});
        CHECK(std::abs(rule.apply_shifted(zero, f) - rule.apply(f)) < 1e-15);
    }
    SUBCASE("constants unaffected") {
        const Shift s(std::vector<double>{0.3, 0.9});
        const auto v = rule.apply_shifted(s, [](std::span<const double>) {
            return std::complex<double>{1.0, 0.0};
        });
        CHECK(v.real() == doctest::Approx(1.0));
    }
    SUBCASE("dual mode picks up the phase factor") {
        const Shift s(std::vector<double>{0.3, 0.9});
        const std::vector<int64_t> h{3, -1};  // dual for this rule
        const auto v = rule.apply_shifted(s, fourier_mode(h));
        const double phase = kTwoPi * (3.0 * 0.3 - 1.0 * 0.9);
        CHECK(v.real() == doctest::Approx(std::cos(phase)).epsilon(1e-12));
        CHECK(v.imag() == doctest::Approx(std::sin(phase)).epsilon(1e-12));
        CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("shift coordinates validated") {
        CHECK_THROWS_AS(Shift(std::vector<double>{1.0}), std::invalid_argument);
        CHECK_THROWS_AS(Shift(std::vector<double>{-0.1}), std::invalid_argument);
    }
}

TEST_CASE("dual-lattice error identity for finite Fourier sums") {
    RngStream rng(17, 0);
    for (uint64_t p : {3ULL, 5ULL, 7ULL, 13ULL}) {
        for (int d = 1; d <= 3; ++d) {
            std::vector<uint64_t> z(static_cast<size_t>(d));
            for (auto& zj : z) zj = 1 + rng.next_below(p - 1);
            LatticeRule rule(p, z);

            // random trig polynomial with support in [-6,6]^d
            std::vector<std::pair<std::vector<int64_t>, std::complex<double>>> coeffs;
            for (int t = 0; t < 8; ++t) {
                std::vector<int64_t> h(static_cast<size_t>(d));
                for (auto& hj : h) hj = static_cast<int64_t>(rng.next_below(13)) - 6;
                coeffs.push_back({h, {rng.next_double() - 0.5, rng.next_double() - 0.5}});
            }
            Integrand f = [&coeffs](std::span<const double> x) {
                std::complex<double> acc = 0.0;
                for (const auto& [h, c] : coeffs) {
                    double phase = 0.0;
                    for (size_t j = 0; j < h.size(); ++j)
                        phase += static_cast<double>(h[j]) * x[j];
                    phase *= kTwoPi;
                    acc += c * std::complex<double>{std::cos(phase), std::sin(phase)};
                }
                return acc;
            };

            std::complex<double> mean_coeff = 0.0, dual_sum = 0.0;
            for (const auto& [h, c] : coeffs) {
                int64_t dot = 0;
                bool zero = true;
                for (size_t j = 0; j < h.size(); ++j) {
                    dot += h[j] * static_cast<int64_t>(z[j]);
                    zero = zero && h[j] == 0;
                }
                const int64_t pp = static_cast<int64_t>(p);
                if (zero)
                    mean_coeff += c;
                else if (((dot % pp) + pp) % pp == 0)
                    dual_sum += c;
            }
            const auto err = rule.apply(f) - mean_coeff;
            CHECK(std::abs(err - dual_sum) < 1e-12);
        }
    }
}

TEST_CASE("points export uses 17 significant digits") {
    LatticeRule rule(3, {1, 2});
    const std::string text = points_text(rule);
    std::istringstream is(text);
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        double a = -1, b = -1;
        ls >> a >> b;
        std::vector<double> x(2);
        rule.point(static_cast<uint64_t>(lines), x);
        CHECK(a == x[0]);  // round-trips exactly
        CHECK(b == x[1]);
        ++lines;
    }
    CHECK(lines == 3);
}

TEST_CASE("modulus pool bounds") {
    CHECK(modulus_pool(10) == std::vector<uint64_t>{7});
    CHECK(modulus_pool(20) == std::vector<uint64_t>{11, 13, 17, 19});
    CHECK(modulus_pool(4) == std::vector<uint64_t>{3});
    CHECK(modulus_pool(9) == std::vector<uint64_t>{7});  // 9/2+1 = 5.5 rounds up
    CHECK(modulus_pool(11) == std::vector<uint64_t>{7, 11});
    CHECK_THROWS_AS(modulus_pool(1), std::invalid_argument);
}
