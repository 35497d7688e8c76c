#include "lattice.hpp"

#include <sstream>
#include <stdexcept>

#include "primes.hpp"
#include "util.hpp"

namespace randlat {

LatticeRule::LatticeRule(uint64_t p, std::vector<uint64_t> z) : p_(p), z_(std::move(z)) {
    if (!is_prime(p_)) throw std::invalid_argument("LatticeRule: modulus must be prime");
    if (z_.empty()) throw std::invalid_argument("LatticeRule: empty generating vector");
    for (uint64_t zj : z_) {
        if (zj < 1 || zj >= p_)
            throw std::invalid_argument("LatticeRule: components must lie in {1,...,p-1}");
    }
}

void LatticeRule::point(uint64_t k, std::span<double> out) const {
    for (size_t j = 0; j < z_.size(); ++j)
        out[j] = static_cast<double>((k % p_) * z_[j] % p_) / static_cast<double>(p_);
}

Shift::Shift(std::vector<double> uu) : u(std::move(uu)) {
    if (u.empty()) throw std::invalid_argument("Shift: empty vector");
    for (double v : u) {
        if (!(v >= 0.0) || v >= 1.0)
            throw std::invalid_argument("Shift: coordinates must lie in [0,1)");
    }
}

std::vector<std::vector<double>> points(const LatticeRule& rule) {
    std::vector<std::vector<double>> out(rule.p(), std::vector<double>(static_cast<size_t>(rule.dim())));
    for (uint64_t k = 0; k < rule.p(); ++k) rule.point(k, out[k]);
    return out;
}

std::string points_text(const LatticeRule& rule) {
    std::ostringstream os;
    std::vector<double> x(static_cast<size_t>(rule.dim()));
    for (uint64_t k = 0; k < rule.p(); ++k) {
        rule.point(k, x);
        for (size_t j = 0; j < x.size(); ++j) {
            if (j) os << ' ';
            os << format_g17(x[j]);
        }
        os << '\n';
    }
    return os.str();
}

std::complex<double> LatticeRule::apply(const Integrand& f) const {
    KahanComplex acc;
    std::vector<double> x(z_.size());
    for (uint64_t k = 0; k < p_; ++k) {
        point(k, x);
        acc.add(f(x));
    }
    return acc.value() / static_cast<double>(p_);
}

std::complex<double> LatticeRule::apply_shifted(const Shift& shift, const Integrand& f) const {
    if (shift.u.size() != z_.size())
        throw std::invalid_argument("apply_shifted: shift dimension mismatch");
    KahanComplex acc;
    std::vector<double> x(z_.size());
    for (uint64_t k = 0; k < p_; ++k) {
        point(k, x);
        for (size_t j = 0; j < x.size(); ++j) {
            double v = x[j] + shift.u[j];
            if (v >= 1.0) v -= 1.0;
            x[j] = v;
        }
        acc.add(f(x));
    }
    return acc.value() / static_cast<double>(p_);
}

}  // namespace randlat
