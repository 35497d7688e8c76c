#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace randlat {

// Non-increasing product weights gamma_1 >= gamma_2 >= ..., each in (0,1].
// The list is explicit and finite; indexing past the end is an error rather
// than an implicit extension.
class Weights {
public:
    explicit Weights(std::vector<double> gammas);

    double at(int j) const;  // 0-based
    int size() const { return static_cast<int>(gammas_.size()); }
    std::span<const double> values() const { return gammas_; }

    Weights pow(double e) const;  // elementwise gamma^e, e > 0
    Weights squared() const { return pow(2.0); }
    Weights prefix(int d) const;

private:
    std::vector<double> gammas_;
};

// (d, alpha, gamma): the parameters identifying the weighted space.
struct SpaceParams {
    int d;
    double alpha;
    Weights weights;

    SpaceParams(int dim, double a, Weights w);
};

// Tuning knobs of the randomized algorithm. lambda/delta/tau appear in the
// error bounds; try_cap bounds the rejection loop.
struct AlgorithmParams {
    double lambda = 0.0;
    double delta = 0.1;
    double tau = 0.5;
    int try_cap = 64;

    static AlgorithmParams defaults(double alpha, bool shifted);
    void validate(double alpha, bool shifted) const;
};

// Riemann zeta for real beta > 1. Closed forms at beta in {2,4,6},
// Euler-Maclaurin otherwise (relative error well below 1e-14).
double zeta(double beta);

// r(h) = max{1, |h|^alpha / gamma}; the per-mode penalty of the space norm.
double r_value(double alpha, double gamma, int64_t h);

// Product of per-coordinate penalties over the first d = h.size() coords.
double r_vector(double alpha, const Weights& w, std::span<const int64_t> h);
double r_vector(const SpaceParams& sp, std::span<const int64_t> h);

// V_d(beta, gamma) = 3 * prod_{j<d} (1 + 2 gamma_j zeta(beta)), beta > 1.
double v_d(double beta, const Weights& w, int d);

// Certified bracket from a truncated box sum of sum_h 1/r_beta(h):
// [lower, upper] is guaranteed to contain the full lattice sum
// prod_j (1 + 2 gamma_j zeta(beta)).
struct SumInverseRInterval {
    double lower;  // plain box sum over [-trunc, trunc]^d
    double upper;  // per-coordinate truncated sums plus integral tails
};
SumInverseRInterval sum_inverse_r_box(double beta, const Weights& w, int d, int64_t trunc);

// Exact |{h : r_beta(h) <= threshold}| by box enumeration. Boundary ties
// (r exactly equal to threshold) are counted. Throws budget_error if the
// enumeration box exceeds `budget` cells.
int64_t count_small_r(double beta, const Weights& w, int d, double threshold,
                      uint64_t budget = 200'000'000);

}  // namespace randlat
