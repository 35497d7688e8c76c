#include "testfns.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "errors.hpp"
#include "merit.hpp"
#include "primes.hpp"
#include "util.hpp"

namespace randlat {

namespace {

// c_{2a} = (-1)^{a+1} (2 pi)^{2a} / (2a)!
double kernel_coefficient_2a(int a) {
    const double twopi = 2.0 * std::numbers::pi;
    switch (a) {
        case 1:
            return twopi * twopi / 2.0;
        case 2:
            return -std::pow(twopi, 4) / 24.0;
        case 3:
            return std::pow(twopi, 6) / 720.0;
        default:
            throw unsupported_error("kernel coefficient: smoothness must be 1, 2 or 3");
    }
}

int even_int_or_throw(double two_alpha, const char* who) {
    for (int b : {2, 4, 6}) {
        if (std::abs(two_alpha - b) < 1e-9) return b;
    }
    throw unsupported_error(std::string(who) + ": requires 2*alpha in {2,4,6}");
}

}  // namespace

TestFunction worst_case_fn(const LatticeRule& rule, const SpaceParams& space) {
    if (space.d != rule.dim())
        throw std::invalid_argument("worst_case_fn: dimension mismatch");
    const int beta = even_int_or_throw(2.0 * space.alpha, "worst_case_fn");
    const Weights gsq = space.weights.prefix(space.d).squared();
    const double merit = p_merit_closed(rule, beta, gsq).value;
    if (!(merit > 0.0)) throw std::runtime_error("worst_case_fn: empty dual sum");

    const double c = kernel_coefficient_2a(beta / 2);
    const double scale = 1.0 / std::sqrt(merit);
    const uint64_t p = rule.p();
    const int d = rule.dim();

    // node fractions {k z_j / p}, exact rationals
    std::vector<double> nodes(static_cast<size_t>(d) * p);
    for (uint64_t k = 0; k < p; ++k) {
        for (int j = 0; j < d; ++j)
            nodes[static_cast<size_t>(k) * d + static_cast<size_t>(j)] =
                static_cast<double>(k * rule.z()[static_cast<size_t>(j)] % p) /
                static_cast<double>(p);
    }
    std::vector<double> gam(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) gam[static_cast<size_t>(j)] = gsq.at(j);

    TestFunction f;
    f.kind = "worst_case";
    f.norm = 1.0;
    f.exact_integral = 0.0;
    f.real_valued = true;
    f.descriptor = {{"kind", "worst_case"},
                    {"p", p},
                    {"z", std::vector<uint64_t>(rule.z().begin(), rule.z().end())}};
    f.evaluator = [beta, c, scale, p, d, nodes = std::move(nodes),
                   gam = std::move(gam)](std::span<const double> x) -> std::complex<double> {
        KahanSum acc;
        for (uint64_t k = 0; k < p; ++k) {
            double prod = 1.0;
            for (int j = 0; j < d; ++j) {
                const double t =
                    fractional(x[static_cast<size_t>(j)] +
                               nodes[static_cast<size_t>(k) * d + static_cast<size_t>(j)]);
                prod *= 1.0 + gam[static_cast<size_t>(j)] * c * bernoulli_even(beta, t);
            }
            acc.add(prod);
        }
        return {(acc.value() / static_cast<double>(p) - 1.0) * scale, 0.0};
    };
    return f;
}

TestFunction lower_bound_fn(uint64_t n, const SpaceParams& space) {
    const auto pool = modulus_pool(n);
    if (pool.empty()) throw std::invalid_argument("lower_bound_fn: empty modulus pool");
    const double root = std::sqrt(static_cast<double>(pool.size()));

    std::vector<double> freq(pool.size()), coeff(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) {
        freq[i] = static_cast<double>(pool[i]);
        coeff[i] = 1.0 / (r_value(space.alpha, space.weights.at(0),
                                  static_cast<int64_t>(pool[i])) *
                          root);
    }

    TestFunction f;
    f.kind = "lower_bound";
    f.norm = 1.0;
    f.exact_integral = 0.0;
    f.real_valued = false;
    f.descriptor = {{"kind", "lower_bound"}, {"n", n}};
    f.evaluator = [freq = std::move(freq),
                   coeff = std::move(coeff)](std::span<const double> x) -> std::complex<double> {
        const double twopi = 2.0 * std::numbers::pi;
        KahanComplex acc;
        for (size_t i = 0; i < freq.size(); ++i) {
            const double phase = twopi * freq[i] * x[0];
            acc.add(std::complex<double>(coeff[i] * std::cos(phase), coeff[i] * std::sin(phase)));
        }
        return acc.value();
    };
    return f;
}

TestFunction product_kernel_fn(const SpaceParams& space, int kernel_alpha) {
    if (kernel_alpha < 1 || kernel_alpha > 3)
        throw unsupported_error("product_kernel_fn: kernel_alpha must be 1, 2 or 3");
    // norm in H_{alpha,gamma}: sum over modes needs 4a - 2 alpha > 1
    const double norm_beta = 4.0 * kernel_alpha - 2.0 * space.alpha;
    if (!(norm_beta > 1.0))
        throw std::invalid_argument("product_kernel_fn: norm diverges for this alpha");
    const int beta = 2 * kernel_alpha;
    const double c = kernel_coefficient_2a(kernel_alpha);

    std::vector<double> gam(static_cast<size_t>(space.d));
    double norm_sq = 1.0;
    const double z = zeta(norm_beta);
    for (int j = 0; j < space.d; ++j) {
        const double g = space.weights.at(j);
        gam[static_cast<size_t>(j)] = g * g;
        norm_sq *= 1.0 + 2.0 * g * g * z;
    }

    TestFunction f;
    f.kind = "product_kernel";
    f.norm = std::sqrt(norm_sq);
    f.exact_integral = 1.0;
    f.real_valued = true;
    f.descriptor = {{"kind", "product_kernel"}, {"kernel_alpha", kernel_alpha}};
    const int d = space.d;
    f.evaluator = [beta, c, d, gam = std::move(gam)](std::span<const double> x)
        -> std::complex<double> {
        double prod = 1.0;
        for (int j = 0; j < d; ++j)
            prod *= 1.0 + gam[static_cast<size_t>(j)] *
                              c * bernoulli_even(beta, fractional(x[static_cast<size_t>(j)]));
        return {prod, 0.0};
    };
    return f;
}

TestFunction trig_poly_fn(const std::map<std::vector<int64_t>, std::complex<double>>& coeffs,
                          const SpaceParams& space) {
    std::vector<std::vector<int64_t>> hs;
    std::vector<std::complex<double>> cs;
    std::complex<double> integral = 0.0;
    double norm_sq = 0.0;
    for (const auto& [h, c] : coeffs) {
        if (static_cast<int>(h.size()) != space.d)
            throw std::invalid_argument("trig_poly_fn: coefficient dimension mismatch");
        bool zero = true;
        for (int64_t v : h) zero = zero && v == 0;
        if (zero) integral += c;
        const double r = r_vector(space, h);
        norm_sq += std::norm(r * c);
        hs.push_back(h);
        cs.push_back(c);
    }

    // real iff coefficients are conjugate-symmetric
    bool real = true;
    for (const auto& [h, c] : coeffs) {
        std::vector<int64_t> neg(h.size());
        for (size_t j = 0; j < h.size(); ++j) neg[j] = -h[j];
        auto it = coeffs.find(neg);
        if (it == coeffs.end() || std::abs(it->second - std::conj(c)) > 1e-15 * (1.0 + std::abs(c))) {
            real = false;
            break;
        }
    }

    nlohmann::json jc = nlohmann::json::array();
    for (size_t i = 0; i < hs.size(); ++i)
        jc.push_back({{"h", hs[i]}, {"re", cs[i].real()}, {"im", cs[i].imag()}});

    TestFunction f;
    f.kind = "trig_poly";
    f.norm = std::sqrt(norm_sq);
    f.exact_integral = integral;
    f.real_valued = real;
    f.descriptor = {{"kind", "trig_poly"}, {"coeffs", jc}};
    f.evaluator = [hs = std::move(hs), cs = std::move(cs)](std::span<const double> x)
        -> std::complex<double> {
        const double twopi = 2.0 * std::numbers::pi;
        KahanComplex acc;
        for (size_t i = 0; i < hs.size(); ++i) {
            double phase = 0.0;
            for (size_t j = 0; j < hs[i].size(); ++j)
                phase += static_cast<double>(hs[i][j]) * x[j];
            phase *= twopi;
            acc.add(cs[i] * std::complex<double>(std::cos(phase), std::sin(phase)));
        }
        return acc.value();
    };
    return f;
}

TestFunction constant_fn(double value, int d) {
    (void)d;
    TestFunction f;
    f.kind = "constant";
    f.norm = std::abs(value);
    f.exact_integral = value;
    f.real_valued = true;
    f.descriptor = {{"kind", "constant"}, {"value", value}};
    f.evaluator = [value](std::span<const double>) -> std::complex<double> {
        return {value, 0.0};
    };
    return f;
}

TestFunction testfn_from_json(const nlohmann::json& desc, const SpaceParams& space,
                              uint64_t n_hint) {
    const std::string kind = desc.at("kind").get<std::string>();
    if (kind == "constant") return constant_fn(desc.value("value", 1.0), space.d);
    if (kind == "product_kernel")
        return product_kernel_fn(space, desc.value("kernel_alpha", 1));
    if (kind == "lower_bound")
        return lower_bound_fn(desc.value("n", n_hint), space);
    if (kind == "worst_case") {
        const auto z = desc.at("z").get<std::vector<uint64_t>>();
        return worst_case_fn(LatticeRule(desc.at("p").get<uint64_t>(), z), space);
    }
    if (kind == "trig_poly") {
        std::map<std::vector<int64_t>, std::complex<double>> coeffs;
        for (const auto& item : desc.at("coeffs")) {
            coeffs[item.at("h").get<std::vector<int64_t>>()] =
                std::complex<double>(item.value("re", 0.0), item.value("im", 0.0));
        }
        return trig_poly_fn(coeffs, space);
    }
    throw std::invalid_argument("testfn_from_json: unknown kind '" + kind + "'");
}

}  // namespace randlat
