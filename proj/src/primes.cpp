#include "primes.hpp"

#include <cmath>
#include <stdexcept>

namespace randlat {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

}  // namespace

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // this witness set is deterministic for all n < 3.3e24
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<uint64_t> primes_between(uint64_t lo, uint64_t hi) {
    std::vector<uint64_t> out;
    if (hi < 2 || hi < lo) return out;
    if (lo < 2) lo = 2;
    std::vector<char> composite(hi + 1, 0);
    for (uint64_t i = 2; i * i <= hi; ++i) {
        if (!composite[i]) {
            for (uint64_t j = i * i; j <= hi; j += i) composite[j] = 1;
        }
    }
    for (uint64_t i = lo; i <= hi; ++i) {
        if (!composite[i]) out.push_back(i);
    }
    return out;
}

std::vector<uint64_t> modulus_pool(uint64_t n) {
    if (n < 2) throw std::invalid_argument("modulus_pool: n must be >= 2");
    const uint64_t lo = (n % 2 == 0) ? n / 2 + 1 : (n + 3) / 2;
    return primes_between(lo, n);
}

}  // namespace randlat
