#include <doctest.h>

#include "merit.hpp"
#include "verify.hpp"

using namespace randlat;

TEST_CASE("quick verification grid passes") {
    VerifyOptions opt;
    opt.quick = true;
    const VerifyReport report = run_verify_suite(opt);
    CHECK(report.all_passed);
    CHECK(report.checks.size() >= 8);
    const auto j = report.to_json();
    CHECK(j["all_passed"] == true);
}

TEST_CASE("a corrupted merit is caught by the averaging or oracle checks") {
    VerifyOptions opt;
    opt.quick = true;
    // a wrong kernel constant (1/5 instead of 1/6 in B_2) shifts every
    // merit value by about gamma * pi^2 / 3 * (1/5 - 1/6) per coordinate
    opt.merit_closed = [](const LatticeRule& rule, int beta, const Weights& w) {
        MeritResult m = p_merit_closed(rule, beta, w);
        m.value += 2.0 * 9.8696 * (1.0 / 5.0 - 1.0 / 6.0) * w.at(0);
        return m;
    };
    const VerifyReport report = run_verify_suite(opt);
    bool caught = false;
    for (const auto& c : report.checks) {
        if ((c.name == "merit_average_bound" || c.name == "merit_oracle_equivalence" ||
             c.name == "good_vector_abundance") &&
            !c.passed)
            caught = true;
    }
    CHECK(caught);
    CHECK_FALSE(report.all_passed);
}
