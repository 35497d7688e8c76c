#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>

namespace randlat {

// Neumaier-compensated accumulator. Used wherever a sum over many terms
// feeds a tolerance-sensitive comparison (rule application, merit sums).
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class KahanComplex {
public:
    void add(std::complex<double> z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_, im_;
};

// 17 significant digits: round-trips a double exactly in decimal.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double fractional(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;  // guard against floor rounding at integers
    return f;
}

}  // namespace randlat
