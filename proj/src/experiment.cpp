#include "experiment.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"
#include "testfns.hpp"
#include "util.hpp"

namespace randlat {

namespace {

std::vector<double> expand_gammas(const nlohmann::json& spec, int d) {
    std::vector<double> g;
    if (spec.is_array()) {
        g = spec.get<std::vector<double>>();
    } else if (spec.is_number()) {
        g.assign(static_cast<size_t>(d), spec.get<double>());
    } else if (spec.is_object() && spec.contains("const")) {
        g.assign(static_cast<size_t>(d), spec.at("const").get<double>());
    } else if (spec.is_object() && spec.contains("power")) {
        const double e = spec.at("power").get<double>();
        const double s = spec.value("scale", 1.0);
        for (int j = 1; j <= d; ++j)
            g.push_back(s * std::pow(static_cast<double>(j), -e));
    } else {
        throw std::invalid_argument("config: gammas must be an array, a number, "
                                    "{\"const\":x} or {\"power\":e,\"scale\":s}");
    }
    if (static_cast<int>(g.size()) < d)
        throw std::invalid_argument("config: gammas expand to fewer than d entries");
    g.resize(static_cast<size_t>(d));
    return g;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    const auto& sp = j.at("space");
    const int d = sp.at("dims").get<int>();
    const double alpha = sp.at("alpha").get<double>();
    SpaceParams space(d, alpha, Weights(expand_gammas(sp.at("gammas"), d)));

    const bool shifted = j.value("shifted", false);
    AlgorithmParams alg = AlgorithmParams::defaults(alpha, shifted);
    if (j.contains("alg")) {
        const auto& a = j.at("alg");
        if (a.contains("lambda")) alg.lambda = a.at("lambda").get<double>();
        if (a.contains("delta")) alg.delta = a.at("delta").get<double>();
        if (a.contains("tau")) alg.tau = a.at("tau").get<double>();
        if (a.contains("try_cap")) alg.try_cap = a.at("try_cap").get<int>();
    }

    ExperimentConfig cfg{space, alg, {}, 1, nlohmann::json{{"kind", "product_kernel"}},
                         shifted, 1, false, ZpMode::full};
    cfg.n_grid = j.at("n_grid").get<std::vector<uint64_t>>();
    for (uint64_t n : cfg.n_grid) {
        if (n < 4) throw std::invalid_argument("config: every n must be >= 4");
    }
    cfg.replications = j.at("replications").get<int>();
    if (cfg.replications < 1) throw std::invalid_argument("config: replications must be >= 1");
    if (j.contains("testfn")) cfg.testfn = j.at("testfn");
    cfg.seed = j.value("seed", 1ULL);
    cfg.timing = j.value("timing", false);
    if (j.value("relaxed", false)) cfg.mode = ZpMode::relaxed;
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
    std::vector<double> g(space.weights.values().begin(),
                          space.weights.values().begin() + space.d);
    return {{"space", {{"dims", space.d}, {"alpha", space.alpha}, {"gammas", g}}},
            {"alg",
             {{"lambda", alg.lambda},
              {"delta", alg.delta},
              {"tau", alg.tau},
              {"try_cap", alg.try_cap}}},
            {"n_grid", n_grid},
            {"replications", replications},
            {"testfn", testfn},
            {"shifted", shifted},
            {"seed", seed},
            {"timing", timing},
            {"relaxed", mode == ZpMode::relaxed}};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult result;
    for (size_t ni = 0; ni < config.n_grid.size(); ++ni) {
        const uint64_t n = config.n_grid[ni];
        TestFunction f = testfn_from_json(config.testfn, config.space, n);
        result.estimates_real = result.estimates_real && f.real_valued;

        KahanSum abs_sum, sq_sum, tries_sum;
        int ok = 0, failures = 0;
        for (int rep = 0; rep < config.replications; ++rep) {
            const uint64_t stream = (static_cast<uint64_t>(ni) << 32) | static_cast<uint64_t>(rep);
            RngStream rng(config.seed, stream);
            ExperimentRecord rec;
            rec.n = n;
            rec.rep = rep;
            rec.seed = rng.stream_id();
            const auto t0 = std::chrono::steady_clock::now();
            try {
                IntegrateResult r = integrate_once(f.evaluator, n, config.space, config.alg,
                                                   rng, config.shifted, config.mode);
                rec.p = r.record.p;
                rec.z = r.record.z;
                rec.shift = r.record.shift;
                rec.tries = r.record.tries;
                rec.estimate = r.estimate;
                rec.abs_error = std::abs(r.estimate - f.exact_integral);
                rec.sq_error = rec.abs_error * rec.abs_error;
            } catch (const draw_error& e) {
                rec.failed = true;
                rec.tries = e.tries;
                ++failures;
            }
            if (config.timing) {
                const auto t1 = std::chrono::steady_clock::now();
                rec.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            }
            if (!rec.failed) {
                ++ok;
                abs_sum.add(rec.abs_error);
                sq_sum.add(rec.sq_error);
                tries_sum.add(static_cast<double>(rec.tries));
            }
            result.records.push_back(std::move(rec));
        }
        if (ok == 0)
            throw std::runtime_error("run_experiment: every draw failed at n = " + std::to_string(n));
        NAggregate agg;
        agg.n = n;
        agg.mean_abs_error = abs_sum.value() / ok;
        agg.rmse = std::sqrt(sq_sum.value() / ok);
        agg.mean_tries = tries_sum.value() / ok;
        agg.failures = failures;
        result.aggregates.push_back(agg);
    }
    return result;
}

std::string records_csv(const ExperimentResult& result) {
    std::ostringstream os;
    os << "n,rep,p,z,shift,estimate,abs_error,sq_error,tries,seed,ms\n";
    char msbuf[32];
    for (const auto& r : result.records) {
        os << r.n << ',' << r.rep << ',';
        if (!r.failed) os << r.p;
        os << ',';
        for (size_t j = 0; j < r.z.size(); ++j) {
            if (j) os << ';';
            os << r.z[j];
        }
        os << ',';
        if (r.shift) {
            for (size_t j = 0; j < r.shift->size(); ++j) {
                if (j) os << ';';
                os << format_g17((*r.shift)[j]);
            }
        }
        os << ',';
        if (!r.failed) {
            if (result.estimates_real)
                os << format_g17(r.estimate.real());
            else
                os << format_g17(r.estimate.real()) << ';' << format_g17(r.estimate.imag());
            os << ',' << format_g17(r.abs_error) << ',' << format_g17(r.sq_error);
        } else {
            os << ",,";
        }
        os << ',' << r.tries << ',' << r.seed << ',';
        std::snprintf(msbuf, sizeof msbuf, "%.3f", r.ms);
        os << msbuf << '\n';
    }
    return os.str();
}

RateFit fit_rate(std::span<const double> n_values, std::span<const double> errors) {
    if (n_values.size() != errors.size())
        throw std::invalid_argument("fit_rate: mismatched inputs");
    std::vector<double> x, y;
    uint64_t n_min = 0, n_max = 0;
    for (size_t i = 0; i < n_values.size(); ++i) {
        if (!(errors[i] > 0.0)) continue;  // dropped with a note in the fit record
        x.push_back(std::log(n_values[i]));
        y.push_back(std::log(errors[i]));
        const auto n = static_cast<uint64_t>(n_values[i]);
        if (n_min == 0 || n < n_min) n_min = n;
        if (n > n_max) n_max = n;
    }
    const size_t m = x.size();
    if (m < 4) throw std::invalid_argument("fit_rate: need at least 4 positive data points");

    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double resid = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += resid * resid;
    }
    fit.slope_stderr = (m > 2) ? std::sqrt(ssr / static_cast<double>(m - 2) / sxx) : 0.0;
    fit.points_used = static_cast<int>(m);
    fit.n_min = n_min;
    fit.n_max = n_max;
    return fit;
}

uint64_t sufficient_n(double eps, const SpaceParams& space, const AlgorithmParams& alg,
                      bool shifted, double c) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("sufficient_n: eps must lie in (0,1)");
    if (!(c > 0.0)) throw std::invalid_argument("sufficient_n: c must be positive");
    if (!shifted && !(space.alpha > 0.5))
        throw std::invalid_argument("sufficient_n: unshifted path needs alpha > 1/2");
    if (shifted && !(space.alpha > 0.0))
        throw std::invalid_argument("sufficient_n: shifted path needs alpha > 0");
    alg.validate(space.alpha, shifted);

    const double lambda = alg.lambda, delta = alg.delta;
    const Weights raised = space.weights.prefix(space.d).pow(1.0 / lambda);
    const double v = v_d(space.alpha / lambda, raised, space.d);

    double n_real;
    if (!shifted) {
        const double expo = lambda + 0.5 - delta;
        const double bigc = c * std::pow(2.0, 3.0 * lambda - 2.0 * delta - 1.0) / delta *
                            std::sqrt((lambda - delta) / (lambda - delta + 0.5));
        const double power_term =
            std::pow(bigc * v, 1.0 / expo) * std::pow(eps, -1.0 / expo);
        n_real = std::max(4.0 * v, power_term);
    } else {
        const double expo = lambda + 0.5 - delta * lambda / 2.0;
        const double base = c / (space.alpha * delta) * std::pow(4.0 * v, lambda);
        n_real = std::pow(base, 1.0 / expo) * std::pow(eps, -1.0 / expo);
    }
    if (!(n_real < 9.0e18)) throw std::overflow_error("sufficient_n: result exceeds 64 bits");
    return static_cast<uint64_t>(std::ceil(n_real));
}

nlohmann::json summary_json(const ExperimentConfig& config, const ExperimentResult& result) {
    nlohmann::json per_n = nlohmann::json::array();
    std::vector<double> ns, mean_abs, rmse;
    for (const auto& a : result.aggregates) {
        per_n.push_back({{"n", a.n},
                         {"mean_abs_error", a.mean_abs_error},
                         {"rmse", a.rmse},
                         {"mean_tries", a.mean_tries},
                         {"failures", a.failures}});
        ns.push_back(static_cast<double>(a.n));
        mean_abs.push_back(a.mean_abs_error);
        rmse.push_back(a.rmse);
    }
    nlohmann::json j{{"config", config.to_json()}, {"per_n", per_n},
                     {"error_metric", "per-function randomized error (fixed integrand)"}};
    auto put_fit = [&](const char* key, std::span<const double> errs) {
        try {
            const RateFit f = fit_rate(ns, errs);
            j[key] = {{"slope", f.slope},
                      {"intercept", f.intercept},
                      {"slope_stderr", f.slope_stderr},
                      {"points_used", f.points_used},
                      {"n_min", f.n_min},
                      {"n_max", f.n_max}};
        } catch (const std::invalid_argument&) {
            j[key] = nullptr;
        }
    };
    put_fit("fit_mean_abs", mean_abs);
    put_fit("fit_rmse", rmse);
    return j;
}

}  // namespace randlat
