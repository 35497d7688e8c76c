#pragma once

#include <cstdint>
#include <vector>

namespace randlat {

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(uint64_t n);

// All primes in [lo, hi] by sieve.
std::vector<uint64_t> primes_between(uint64_t lo, uint64_t hi);

// The modulus pool for budget n: primes p with n/2 + 1 <= p <= n
// (real-valued lower endpoint, so ceil(n/2) + 1 for odd n).
std::vector<uint64_t> modulus_pool(uint64_t n);

}  // namespace randlat
