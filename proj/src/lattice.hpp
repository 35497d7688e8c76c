#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace randlat {

// Integrands are pure maps [0,1)^d -> C. Real integrands return a zero
// imaginary part.
using Integrand = std::function<std::complex<double>(std::span<const double>)>;

struct Shift {
    explicit Shift(std::vector<double> uu);
    std::vector<double> u;
};

// Rank-1 rule: p prime, z in {1,...,p-1}^d. Nodes are {k z / p}, k < p.
class LatticeRule {
public:
    LatticeRule(uint64_t p, std::vector<uint64_t> z);

    uint64_t p() const { return p_; }
    int dim() const { return static_cast<int>(z_.size()); }
    std::span<const uint64_t> z() const { return z_; }

    // k-th node; exact integer arithmetic (k*z_j mod p) before the division
    void point(uint64_t k, std::span<double> out) const;

    // Equal-weight average of f over the node set (compensated summation).
    std::complex<double> apply(const Integrand& f) const;

    // Average of f({x + u}) over the node set.
    std::complex<double> apply_shifted(const Shift& shift, const Integrand& f) const;

private:
    uint64_t p_;
    std::vector<uint64_t> z_;
};

std::vector<std::vector<double>> points(const LatticeRule& rule);

// One node per line, space-separated coordinates, 17 significant digits.
std::string points_text(const LatticeRule& rule);

}  // namespace randlat
