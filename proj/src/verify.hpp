#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "korobov.hpp"
#include "lattice.hpp"
#include "merit.hpp"

namespace randlat {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // offending instance on failure, summary otherwise
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed = true;

    nlohmann::json to_json() const;
};

struct VerifyOptions {
    bool quick = false;  // p = 3, d = 1 grid; completes in well under a second
    // test hook: replaces the closed-form merit inside the averaging,
    // abundance and oracle-equivalence checks
    std::function<MeritResult(const LatticeRule&, int, const Weights&)> merit_closed;
};

// Exhaustive small-instance checks of the counting identities, the merit
// averaging bounds, the worst-case equality and the lower-bound formula.
VerifyReport run_verify_suite(const VerifyOptions& options = {});

}  // namespace randlat
