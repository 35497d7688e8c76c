#include "korobov.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <stdexcept>

#include "errors.hpp"
#include "util.hpp"

namespace randlat {

Weights::Weights(std::vector<double> gammas) : gammas_(std::move(gammas)) {
    if (gammas_.empty()) throw std::invalid_argument("Weights: empty weight list");
    double prev = 1.0;
    for (double g : gammas_) {
        if (!(g > 0.0) || g > 1.0)
            throw std::invalid_argument("Weights: entries must lie in (0,1]");
        if (g > prev + 1e-15)
            throw std::invalid_argument("Weights: sequence must be non-increasing");
        prev = g;
    }
}

double Weights::at(int j) const {
    if (j < 0 || j >= size())
        throw std::out_of_range("Weights: index beyond the explicit list");
    return gammas_[static_cast<size_t>(j)];
}

Weights Weights::pow(double e) const {
    if (!(e > 0.0)) throw std::invalid_argument("Weights::pow: exponent must be positive");
    std::vector<double> out(gammas_.size());
    for (size_t i = 0; i < gammas_.size(); ++i) {
        // gamma^e is positive but can underflow for large e; keep it
        // representable so the (0,1] invariant survives
        out[i] = std::max(std::pow(gammas_[i], e), std::numeric_limits<double>::min());
    }
    return Weights(std::move(out));
}

Weights Weights::prefix(int d) const {
    if (d < 1 || d > size()) throw std::out_of_range("Weights::prefix: bad length");
    return Weights(std::vector<double>(gammas_.begin(), gammas_.begin() + d));
}

SpaceParams::SpaceParams(int dim, double a, Weights w)
    : d(dim), alpha(a), weights(std::move(w)) {
    if (d < 1) throw std::invalid_argument("SpaceParams: d must be >= 1");
    if (!(alpha >= 0.0)) throw std::invalid_argument("SpaceParams: alpha must be >= 0");
    if (weights.size() < d)
        throw std::invalid_argument("SpaceParams: need at least d weights");
}

AlgorithmParams AlgorithmParams::defaults(double alpha, bool shifted) {
    AlgorithmParams a;
    if (alpha <= 0.0) return a;  // lambda unused when alpha == 0
    const double lo = shifted ? 0.0 : 0.5;
    double lam = alpha - 0.05;
    if (lam <= lo || lam >= alpha) lam = 0.5 * (lo + alpha);
    a.lambda = lam;
    if (!shifted) a.delta = std::min(0.1, 0.5 * (lam - 0.5));
    return a;
}

void AlgorithmParams::validate(double alpha, bool shifted) const {
    if (alpha == 0.0) return;  // no lambda constraint applies
    if (!(lambda > 0.0) || !(lambda < alpha))
        throw std::invalid_argument("AlgorithmParams: lambda must lie in (0, alpha)");
    if (!shifted) {
        if (!(lambda > 0.5))
            throw std::invalid_argument("AlgorithmParams: unshifted algorithm needs lambda > 1/2");
        if (!(delta > 0.0) || !(delta < lambda - 0.5))
            throw std::invalid_argument("AlgorithmParams: unshifted algorithm needs delta in (0, lambda - 1/2)");
    } else if (!(delta > 0.0)) {
        throw std::invalid_argument("AlgorithmParams: delta must be positive");
    }
    if (!(tau > 0.0) || !(tau < 1.0))
        throw std::invalid_argument("AlgorithmParams: tau must lie in (0,1)");
    if (try_cap < 1) throw std::invalid_argument("AlgorithmParams: try_cap must be >= 1");
}

double zeta(double beta) {
    if (!(beta > 1.0)) throw std::invalid_argument("zeta: requires beta > 1");
    const double pi = std::numbers::pi;
    if (beta == 2.0) return pi * pi / 6.0;
    if (beta == 4.0) return pi * pi * pi * pi / 90.0;
    if (beta == 6.0) return std::pow(pi, 6) / 945.0;

    // Euler-Maclaurin with N = 64 and Bernoulli terms through B12;
    // the first omitted term is below 1e-20 relative for every beta > 1.
    constexpr int N = 64;
    KahanSum acc;
    for (int k = 1; k < N; ++k) acc.add(std::pow(static_cast<double>(k), -beta));
    acc.add(0.5 * std::pow(static_cast<double>(N), -beta));
    acc.add(std::pow(static_cast<double>(N), 1.0 - beta) / (beta - 1.0));
    // B_{2k}/(2k)! for k = 1..6
    static constexpr double coef[6] = {
        1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0,
        1.0 / 47900160.0, -691.0 / 1307674368000.0};
    double rising = beta;
    double power = std::pow(static_cast<double>(N), -beta - 1.0);
    for (int i = 0; i < 6; ++i) {
        acc.add(coef[i] * rising * power);
        rising *= (beta + 2 * i + 1) * (beta + 2 * i + 2);
        power /= static_cast<double>(N) * N;
    }
    return acc.value();
}

double r_value(double alpha, double gamma, int64_t h) {
    if (!(gamma > 0.0) || gamma > 1.0)
        throw std::invalid_argument("r_value: gamma must lie in (0,1]");
    if (!(alpha >= 0.0)) throw std::invalid_argument("r_value: alpha must be >= 0");
    if (h == 0) return 1.0;
    const double mag = std::pow(std::abs(static_cast<double>(h)), alpha);
    return std::max(1.0, mag / gamma);
}

double r_vector(double alpha, const Weights& w, std::span<const int64_t> h) {
    if (static_cast<int>(h.size()) > w.size())
        throw std::invalid_argument("r_vector: more coordinates than weights");
    double prod = 1.0;
    for (size_t j = 0; j < h.size(); ++j)
        prod *= r_value(alpha, w.at(static_cast<int>(j)), h[j]);
    return prod;
}

double r_vector(const SpaceParams& sp, std::span<const int64_t> h) {
    if (static_cast<int>(h.size()) != sp.d)
        throw std::invalid_argument("r_vector: dimension mismatch");
    return r_vector(sp.alpha, sp.weights, h);
}

double v_d(double beta, const Weights& w, int d) {
    if (d < 1 || d > w.size()) throw std::invalid_argument("v_d: bad dimension");
    const double z = zeta(beta);
    double prod = 3.0;
    for (int j = 0; j < d; ++j) prod *= 1.0 + 2.0 * w.at(j) * z;
    return prod;
}

namespace {

// largest m >= 0 with r(beta, gamma, m) <= threshold, robust at boundaries
int64_t box_extent(double beta, double gamma, double threshold) {
    if (threshold < 1.0) return -1;  // even h = 0 fails
    if (beta == 0.0) throw unsupported_error("box_extent: alpha = 0 gives an unbounded box");
    auto m = static_cast<int64_t>(std::floor(std::pow(threshold * gamma, 1.0 / beta)));
    if (m < 0) m = 0;
    while (m > 0 && r_value(beta, gamma, m) > threshold) --m;
    while (r_value(beta, gamma, m + 1) <= threshold) ++m;
    return m;
}

}  // namespace

SumInverseRInterval sum_inverse_r_box(double beta, const Weights& w, int d, int64_t trunc) {
    if (!(beta > 1.0)) throw std::invalid_argument("sum_inverse_r_box: beta must be > 1");
    if (trunc < 1) throw std::invalid_argument("sum_inverse_r_box: trunc must be >= 1");
    if (d < 1 || d > w.size()) throw std::invalid_argument("sum_inverse_r_box: bad dimension");

    // per-coordinate tables of 1/r for h in [-trunc, trunc]
    std::vector<std::vector<double>> table(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
        auto& t = table[static_cast<size_t>(j)];
        t.resize(static_cast<size_t>(2 * trunc + 1));
        for (int64_t h = -trunc; h <= trunc; ++h)
            t[static_cast<size_t>(h + trunc)] = 1.0 / r_value(beta, w.at(j), h);
    }

    // nested box sum, kept as a literal iteration over the grid so the
    // result is independent of the product identity it is used to check
    KahanSum box;
    std::vector<size_t> idx(static_cast<size_t>(d), 0);
    const size_t width = static_cast<size_t>(2 * trunc + 1);
    if (d == 1) {
        for (double t : table[0]) box.add(t);
    } else {
        // iterate the leading d-1 coordinates, tight loop on the last
        bool done = false;
        while (!done) {
            double prefix = 1.0;
            for (int j = 0; j < d - 1; ++j) prefix *= table[static_cast<size_t>(j)][idx[static_cast<size_t>(j)]];
            const auto& last = table[static_cast<size_t>(d - 1)];
            for (size_t i = 0; i < width; ++i) box.add(prefix * last[i]);
            int j = d - 2;
            while (j >= 0) {
                if (++idx[static_cast<size_t>(j)] < width) break;
                idx[static_cast<size_t>(j)] = 0;
                --j;
            }
            if (j < 0) done = true;
        }
    }

    // upper end: independent per-coordinate sums plus the integral tail
    // 2 gamma sum_{h>H} h^-beta <= 2 gamma H^(1-beta)/(beta-1)
    double upper = 1.0;
    for (int j = 0; j < d; ++j) {
        KahanSum s;
        for (int64_t h = 1; h <= trunc; ++h)
            s.add(std::pow(static_cast<double>(h), -beta));
        const double truncated = 1.0 + 2.0 * w.at(j) * s.value();
        const double tail =
            2.0 * w.at(j) * std::pow(static_cast<double>(trunc), 1.0 - beta) / (beta - 1.0);
        upper *= truncated + tail;
    }
    return {box.value(), upper};
}

int64_t count_small_r(double beta, const Weights& w, int d, double threshold, uint64_t budget) {
    if (!(threshold > 0.0)) throw std::invalid_argument("count_small_r: threshold must be > 0");
    if (d < 1 || d > w.size()) throw std::invalid_argument("count_small_r: bad dimension");
    if (threshold < 1.0) return 0;  // r >= 1 everywhere

    std::vector<int64_t> extent(static_cast<size_t>(d));
    double cells = 1.0;
    for (int j = 0; j < d; ++j) {
        extent[static_cast<size_t>(j)] = box_extent(beta, w.at(j), threshold);
        cells *= static_cast<double>(2 * extent[static_cast<size_t>(j)] + 1);
    }
    if (cells > static_cast<double>(budget))
        throw budget_error("count_small_r: enumeration budget exceeded");

    int64_t count = 0;
    std::vector<int64_t> h(static_cast<size_t>(d), 0);
    // depth-first over the box with prefix pruning
    auto rec = [&](auto&& self, int j, double prefix) -> void {
        if (j == d) {
            ++count;
            return;
        }
        for (int64_t v = -extent[static_cast<size_t>(j)]; v <= extent[static_cast<size_t>(j)]; ++v) {
            const double r = prefix * r_value(beta, w.at(j), v);
            if (r <= threshold) {
                h[static_cast<size_t>(j)] = v;
                self(self, j + 1, r);
            }
        }
    };
    rec(rec, 0, 1.0);
    return count;
}

}  // namespace randlat
