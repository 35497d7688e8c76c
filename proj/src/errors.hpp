#pragma once

#include <stdexcept>
#include <string>

namespace randlat {

// Enumeration or search exceeded its configured budget.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested a computation path that is not available for the given
// parameters (e.g. closed-form merit at non-even beta).
struct unsupported_error : std::invalid_argument {
    explicit unsupported_error(const std::string& what) : std::invalid_argument(what) {}
};

// Rejection sampling exhausted its try cap.
struct draw_error : std::runtime_error {
    draw_error(const std::string& what, int tries_done)
        : std::runtime_error(what), tries(tries_done) {}
    int tries;
};

}  // namespace randlat
