#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "korobov.hpp"
#include "lattice.hpp"

namespace randlat {

// Analytic integrand with known integral and known space norm, used as
// ground truth in experiments. The descriptor replays the construction.
struct TestFunction {
    std::string kind;
    Integrand evaluator;
    std::complex<double> exact_integral;
    double norm = 1.0;
    bool real_valued = true;
    nlohmann::json descriptor;
};

// The unit-norm function attaining the worst-case error of `rule`:
// Fourier mass proportional to 1/r_{2a,g^2} on the nonzero dual lattice.
// Evaluated through the periodic-kernel identity, so it is exact (no series
// truncation); requires 2*alpha in {2,4,6}.
TestFunction worst_case_fn(const LatticeRule& rule, const SpaceParams& space);

// The lower-bound witness: one Fourier mode at (q,0,...,0) per prime q in
// the modulus pool, each with coefficient 1/(r(q) sqrt(#pool)). Complex
// valued; every rule with modulus p in the pool sees the same error
// magnitude gamma_1 / (p^alpha sqrt(#pool)) regardless of z.
TestFunction lower_bound_fn(uint64_t n, const SpaceParams& space);

// Smooth separable integrand prod_j (1 + gamma_j^2 c B_{2a}({x_j})) with
// exact integral 1 and closed-form norm; kernel_alpha in {1,2,3}.
TestFunction product_kernel_fn(const SpaceParams& space, int kernel_alpha);

// Finite Fourier sum from an explicit coefficient map.
TestFunction trig_poly_fn(const std::map<std::vector<int64_t>, std::complex<double>>& coeffs,
                          const SpaceParams& space);

TestFunction constant_fn(double value, int d);

// Rebuild a test function from its JSON descriptor. `n_hint` supplies the
// budget for the lower-bound kind (it depends on n).
TestFunction testfn_from_json(const nlohmann::json& desc, const SpaceParams& space,
                              uint64_t n_hint);

}  // namespace randlat
