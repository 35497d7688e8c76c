#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cbc.hpp"
#include "errors.hpp"
#include "merit.hpp"
#include "sampler.hpp"

using namespace randlat;

TEST_CASE("one-dimensional construction ties break to the smallest z") {
    SpaceParams s(1, 1.0, Weights({1.0}));
    const CbcResult r = cbc_construct(5, 1, s);
    REQUIRE(r.z.size() == 1);
    CHECK(r.z[0] == 1);  // all candidates tie at d=1
    CHECK(r.merit_per_dim[0] ==
          doctest::Approx(p_merit_closed(LatticeRule(5, {1}), 2, Weights({1.0})).value));
}

TEST_CASE("stage merits are the exact prefix merits") {
    SpaceParams s(3, 1.0, Weights({1.0, 0.5, 0.25}));
    const CbcResult r = cbc_construct(13, 3, s);
    REQUIRE(r.z.size() == 3);
    const Weights gsq({1.0, 0.25, 0.0625});
    for (int d = 1; d <= 3; ++d) {
        LatticeRule prefix(13, std::vector<uint64_t>(r.z.begin(), r.z.begin() + d));
        CHECK(r.merit_per_dim[static_cast<size_t>(d - 1)] ==
              doctest::Approx(p_merit_closed(prefix, 2, gsq.prefix(d)).value).epsilon(1e-12));
    }
    // non-decreasing in dimension: a new coordinate only adds dual mass
    CHECK(r.merit_per_dim[0] <= r.merit_per_dim[1] + 1e-15);
    CHECK(r.merit_per_dim[1] <= r.merit_per_dim[2] + 1e-15);
}

TEST_CASE("each stage is optimal given the prefix") {
    SpaceParams s(3, 1.0, Weights({1.0, 0.5, 0.25}));
    for (uint64_t p : {5ULL, 7ULL, 13ULL}) {
        const CbcResult r = cbc_construct(p, 3, s);
        const Weights gsq({1.0, 0.25, 0.0625});
        for (int stage = 0; stage < 3; ++stage) {
            std::vector<uint64_t> z(r.z.begin(), r.z.begin() + stage + 1);
            for (uint64_t cand = 1; cand < p; ++cand) {
                z[static_cast<size_t>(stage)] = cand;
                const double merit =
                    p_merit_closed(LatticeRule(p, z), 2, gsq.prefix(stage + 1)).value;
                CHECK(r.merit_per_dim[static_cast<size_t>(stage)] <= merit + 1e-12);
            }
        }
    }
}

TEST_CASE("d=2 greedy equals the exhaustive optimum") {
    // P(p, (c z1, c z2)) = P(p, (z1, z2)), so fixing z1 = 1 loses nothing
    SpaceParams s(2, 1.0, Weights({1.0, 1.0}));
    const CbcResult r = cbc_construct(7, 2, s);
    double best = 1e300;
    for (uint64_t z1 = 1; z1 < 7; ++z1)
        for (uint64_t z2 = 1; z2 < 7; ++z2)
            best = std::min(
                best, p_merit_closed(LatticeRule(7, {z1, z2}), 2, Weights({1.0, 1.0})).value);
    CHECK(r.merit_per_dim[1] == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("constructed vectors beat the averaging threshold") {
    SpaceParams s(3, 1.0, Weights({1.0, 0.5, 0.25}));
    const Weights gsq({1.0, 0.25, 0.0625});
    for (uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL}) {
        for (int d = 1; d <= 3; ++d) {
            const CbcResult r = cbc_construct(p, d, s);
            const double v = v_d(2.0, gsq, d);
            CHECK(r.merit_per_dim[static_cast<size_t>(d - 1)] <=
                  2.0 * v / static_cast<double>(p));
            // and the CBC vector lands in the relaxed accepted set at lambda = 1/2
            SpaceParams half(d, 1.0, s.weights.prefix(d));
            LatticeRule rule(p, std::vector<uint64_t>(r.z.begin(), r.z.begin() + d));
            CHECK(in_zp_single(rule, half, 0.5));
        }
    }
}

TEST_CASE("parameter validation") {
    SpaceParams s(2, 1.25, Weights({1.0, 0.5}));
    CHECK_THROWS_AS(cbc_construct(7, 2, s), unsupported_error);  // 2a not in {2,4,6}
    SpaceParams ok(2, 1.0, Weights({1.0, 0.5}));
    CHECK_THROWS_AS(cbc_construct(8, 2, ok), std::invalid_argument);  // composite
    CHECK_THROWS_AS(cbc_construct(7, 5, ok), std::invalid_argument);  // too few weights
}

TEST_CASE("json serialization") {
    SpaceParams s(2, 1.0, Weights({1.0, 0.5}));
    const auto j = cbc_construct(5, 2, s).to_json();
    CHECK(j.contains("z"));
    CHECK(j.contains("merit_per_dim"));
    CHECK(j["z"].size() == 2);
}
