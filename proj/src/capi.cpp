#include "randlat/randlat.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "cbc.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "korobov.hpp"
#include "lattice.hpp"
#include "merit.hpp"
#include "primes.hpp"
#include "sampler.hpp"
#include "testfns.hpp"
#include "verify.hpp"

using namespace randlat;

namespace {

thread_local std::string g_last_error = "no error";

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class Fn>
rlat_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const unsupported_error& e) {
        g_last_error = e.what();
        return RLAT_ERR_UNSUPPORTED;
    } catch (const budget_error& e) {
        g_last_error = e.what();
        return RLAT_ERR_BUDGET_EXCEEDED;
    } catch (const draw_error& e) {
        g_last_error = e.what();
        return RLAT_ERR_DRAW_FAILED;
    } catch (const nlohmann::json::exception& e) {
        g_last_error = e.what();
        return RLAT_ERR_BAD_CONFIG;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return RLAT_ERR_INVALID_ARGUMENT;
    } catch (const std::out_of_range& e) {
        g_last_error = e.what();
        return RLAT_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RLAT_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return RLAT_ERR_INTERNAL;
    }
}

rlat_status fail_invalid(const char* msg) {
    g_last_error = msg;
    return RLAT_ERR_INVALID_ARGUMENT;
}

nlohmann::json record_to_json(const DrawRecord& rec) {
    nlohmann::json j{{"n", rec.n}, {"p", rec.p}, {"z", rec.z},
                     {"tries", rec.tries}, {"seed", rec.seed}};
    if (rec.shift)
        j["shift"] = *rec.shift;
    else
        j["shift"] = nullptr;
    return j;
}

}  // namespace

struct rlat_space {
    SpaceParams params;
};

struct rlat_rule {
    LatticeRule rule;
    std::vector<double> shift;  // empty = unshifted
};

struct rlat_testfn {
    TestFunction fn;
    int dim;
};

extern "C" {

const char* rlat_status_name(rlat_status s) {
    switch (s) {
        case RLAT_OK: return "ok";
        case RLAT_ERR_INVALID_ARGUMENT: return "invalid argument";
        case RLAT_ERR_UNSUPPORTED: return "unsupported";
        case RLAT_ERR_BUDGET_EXCEEDED: return "budget exceeded";
        case RLAT_ERR_DRAW_FAILED: return "draw failed";
        case RLAT_ERR_BAD_CONFIG: return "bad config";
        case RLAT_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* rlat_last_error(void) { return g_last_error.c_str(); }

const char* rlat_version(void) { return "0.1.0"; }

void rlat_string_free(char* s) { delete[] s; }
void rlat_buffer_free(void* p) { ::operator delete[](p); }

rlat_status rlat_space_create(int32_t dim, double alpha, const double* gammas,
                              int32_t n_gammas, rlat_space** out) {
    if (!out || !gammas || n_gammas < 1) return fail_invalid("space_create: bad arguments");
    return guarded([&] {
        std::vector<double> g(gammas, gammas + n_gammas);
        *out = new rlat_space{SpaceParams(dim, alpha, Weights(std::move(g)))};
        return RLAT_OK;
    });
}

void rlat_space_destroy(rlat_space* s) { delete s; }

rlat_status rlat_rule_create(uint64_t p, const uint64_t* z, int32_t dim, rlat_rule** out) {
    if (!out || !z || dim < 1) return fail_invalid("rule_create: bad arguments");
    return guarded([&] {
        *out = new rlat_rule{LatticeRule(p, std::vector<uint64_t>(z, z + dim)), {}};
        return RLAT_OK;
    });
}

void rlat_rule_destroy(rlat_rule* r) { delete r; }

uint64_t rlat_rule_p(const rlat_rule* r) { return r ? r->rule.p() : 0; }

int32_t rlat_rule_dim(const rlat_rule* r) { return r ? r->rule.dim() : 0; }

rlat_status rlat_rule_z(const rlat_rule* r, uint64_t* out) {
    if (!r || !out) return fail_invalid("rule_z: bad arguments");
    for (int j = 0; j < r->rule.dim(); ++j) out[j] = r->rule.z()[static_cast<size_t>(j)];
    return RLAT_OK;
}

rlat_status rlat_rule_set_shift(rlat_rule* r, const double* u, int32_t dim) {
    if (!r) return fail_invalid("rule_set_shift: null rule");
    if (!u) {
        r->shift.clear();
        return RLAT_OK;
    }
    if (dim != r->rule.dim()) return fail_invalid("rule_set_shift: dimension mismatch");
    return guarded([&] {
        Shift s(std::vector<double>(u, u + dim));  // validates [0,1)
        r->shift = std::move(s.u);
        return RLAT_OK;
    });
}

rlat_status rlat_rule_points_text(const rlat_rule* r, char** out_text) {
    if (!r || !out_text) return fail_invalid("rule_points_text: bad arguments");
    return guarded([&] {
        *out_text = dup_string(points_text(r->rule));
        return RLAT_OK;
    });
}

rlat_status rlat_merit_p(const rlat_rule* r, const rlat_space* s, double beta,
                         int64_t oracle_trunc, rlat_merit_result* out) {
    if (!r || !s || !out) return fail_invalid("merit_p: bad arguments");
    return guarded([&] {
        const Weights w = s->params.weights.prefix(r->rule.dim());
        const MeritResult m =
            p_merit(r->rule, beta, w, oracle_trunc > 0 ? oracle_trunc : 4096);
        out->value = m.value;
        out->closed_form = m.method == MeritMethod::closed_form ? 1 : 0;
        out->tail_bound = m.tail_bound;
        return RLAT_OK;
    });
}

rlat_status rlat_merit_json(const rlat_rule* r, const rlat_space* s, double beta,
                            int64_t oracle_trunc, char** out_json) {
    if (!r || !s || !out_json) return fail_invalid("merit_json: bad arguments");
    return guarded([&] {
        const Weights w = s->params.weights.prefix(r->rule.dim());
        const MeritResult m =
            p_merit(r->rule, beta, w, oracle_trunc > 0 ? oracle_trunc : 4096);
        std::vector<double> g(w.values().begin(), w.values().end());
        nlohmann::json j{
            {"p", r->rule.p()},
            {"z", std::vector<uint64_t>(r->rule.z().begin(), r->rule.z().end())},
            {"beta", beta},
            {"gammas", g},
            {"value", m.value},
            {"method", m.method == MeritMethod::closed_form ? "closed_form" : "truncated_oracle"},
            {"tail_bound", m.tail_bound}};
        *out_json = dup_string(j.dump());
        return RLAT_OK;
    });
}

rlat_status rlat_worst_case_error(const rlat_rule* r, const rlat_space* s, double* out) {
    if (!r || !s || !out) return fail_invalid("worst_case_error: bad arguments");
    return guarded([&] {
        *out = worst_case_error(r->rule, s->params);
        return RLAT_OK;
    });
}

rlat_status rlat_rho_index(const rlat_rule* r, const rlat_space* s, double* out) {
    if (!r || !s || !out) return fail_invalid("rho_index: bad arguments");
    return guarded([&] {
        *out = rho_index(r->rule, s->params);
        return RLAT_OK;
    });
}

rlat_status rlat_testfn_create(const char* descriptor_json, const rlat_space* s,
                               uint64_t n_hint, rlat_testfn** out) {
    if (!descriptor_json || !s || !out) return fail_invalid("testfn_create: bad arguments");
    return guarded([&] {
        const auto desc = nlohmann::json::parse(descriptor_json);
        *out = new rlat_testfn{testfn_from_json(desc, s->params, n_hint), s->params.d};
        return RLAT_OK;
    });
}

void rlat_testfn_destroy(rlat_testfn* f) { delete f; }

rlat_status rlat_testfn_eval(const rlat_testfn* f, const double* x, int32_t dim,
                             double* out_re, double* out_im) {
    if (!f || !x || !out_re || !out_im) return fail_invalid("testfn_eval: bad arguments");
    if (dim != f->dim) return fail_invalid("testfn_eval: dimension mismatch");
    return guarded([&] {
        const auto v = f->fn.evaluator(std::span<const double>(x, static_cast<size_t>(dim)));
        *out_re = v.real();
        *out_im = v.imag();
        return RLAT_OK;
    });
}

rlat_status rlat_testfn_exact_integral(const rlat_testfn* f, double* out_re, double* out_im) {
    if (!f || !out_re || !out_im) return fail_invalid("testfn_exact_integral: bad arguments");
    *out_re = f->fn.exact_integral.real();
    *out_im = f->fn.exact_integral.imag();
    return RLAT_OK;
}

rlat_status rlat_testfn_norm(const rlat_testfn* f, double* out) {
    if (!f || !out) return fail_invalid("testfn_norm: bad arguments");
    *out = f->fn.norm;
    return RLAT_OK;
}

rlat_status rlat_apply(const rlat_rule* r, const rlat_testfn* f, double* out_re,
                       double* out_im) {
    if (!r || !f || !out_re || !out_im) return fail_invalid("apply: bad arguments");
    if (f->dim != r->rule.dim()) return fail_invalid("apply: dimension mismatch");
    return guarded([&] {
        std::complex<double> v;
        if (r->shift.empty())
            v = r->rule.apply(f->fn.evaluator);
        else
            v = r->rule.apply_shifted(Shift(r->shift), f->fn.evaluator);
        *out_re = v.real();
        *out_im = v.imag();
        return RLAT_OK;
    });
}

rlat_status rlat_sieve_primes(uint64_t n, uint64_t** out_primes, size_t* out_count) {
    if (!out_primes || !out_count) return fail_invalid("sieve_primes: bad arguments");
    return guarded([&] {
        const PrimeRange range = sieve_primes(n);
        auto* buf = static_cast<uint64_t*>(::operator new[](range.primes.size() * sizeof(uint64_t)));
        std::memcpy(buf, range.primes.data(), range.primes.size() * sizeof(uint64_t));
        *out_primes = buf;
        *out_count = range.primes.size();
        return RLAT_OK;
    });
}

rlat_status rlat_acceptance_test(uint64_t p, const uint64_t* z, int32_t dim,
                                 const rlat_space* s, double lambda, int32_t* out_pass) {
    if (!z || !s || !out_pass || dim < 1) return fail_invalid("acceptance_test: bad arguments");
    return guarded([&] {
        *out_pass = acceptance_test(p, std::span<const uint64_t>(z, static_cast<size_t>(dim)),
                                    s->params, lambda)
                        ? 1
                        : 0;
        return RLAT_OK;
    });
}

rlat_status rlat_draw(uint64_t n, const rlat_space* s, double lambda, int32_t try_cap,
                      int32_t shifted, int32_t relaxed, uint64_t seed, uint64_t stream,
                      rlat_rule** out_rule, char** out_record_json) {
    if (!s || !out_record_json) return fail_invalid("draw: bad arguments");
    return guarded([&] {
        AlgorithmParams alg = AlgorithmParams::defaults(s->params.alpha, shifted != 0);
        if (lambda > 0.0) alg.lambda = lambda;
        if (try_cap > 0) alg.try_cap = try_cap;
        RngStream rng(seed, stream);
        DrawRecord rec = draw(n, s->params, alg, rng, shifted != 0,
                              relaxed ? ZpMode::relaxed : ZpMode::full);
        *out_record_json = dup_string(record_to_json(rec).dump());
        if (out_rule) {
            auto* rr = new rlat_rule{LatticeRule(rec.p, rec.z), {}};
            if (rec.shift) rr->shift = *rec.shift;
            *out_rule = rr;
        }
        return RLAT_OK;
    });
}

rlat_status rlat_integrate_once(uint64_t n, const rlat_space* s, double lambda,
                                int32_t try_cap, int32_t shifted, int32_t relaxed,
                                uint64_t seed, uint64_t stream, const char* testfn_json,
                                double* out_re, double* out_im, char** out_record_json) {
    if (!s || !testfn_json || !out_re || !out_im || !out_record_json)
        return fail_invalid("integrate_once: bad arguments");
    return guarded([&] {
        AlgorithmParams alg = AlgorithmParams::defaults(s->params.alpha, shifted != 0);
        if (lambda > 0.0) alg.lambda = lambda;
        if (try_cap > 0) alg.try_cap = try_cap;
        const auto desc = nlohmann::json::parse(testfn_json);
        TestFunction f = testfn_from_json(desc, s->params, n);
        RngStream rng(seed, stream);
        IntegrateResult r = integrate_once(f.evaluator, n, s->params, alg, rng, shifted != 0,
                                           relaxed ? ZpMode::relaxed : ZpMode::full);
        *out_re = r.estimate.real();
        *out_im = r.estimate.imag();
        *out_record_json = dup_string(record_to_json(r.record).dump());
        return RLAT_OK;
    });
}

rlat_status rlat_cbc_construct(uint64_t p, const rlat_space* s, char** out_json) {
    if (!s || !out_json) return fail_invalid("cbc_construct: bad arguments");
    return guarded([&] {
        const CbcResult r = cbc_construct(p, s->params.d, s->params);
        *out_json = dup_string(r.to_json().dump());
        return RLAT_OK;
    });
}

rlat_status rlat_sufficient_n(double eps, const rlat_space* s, double lambda, double delta,
                              int32_t shifted, double c, uint64_t* out_n) {
    if (!s || !out_n) return fail_invalid("sufficient_n: bad arguments");
    return guarded([&] {
        AlgorithmParams alg = AlgorithmParams::defaults(s->params.alpha, shifted != 0);
        if (lambda > 0.0) alg.lambda = lambda;
        if (delta > 0.0) alg.delta = delta;
        *out_n = sufficient_n(eps, s->params, alg, shifted != 0, c > 0.0 ? c : 6.0);
        return RLAT_OK;
    });
}

rlat_status rlat_sufficient_n_json(double eps, const rlat_space* s, double lambda,
                                   double delta, int32_t shifted, double c, char** out_json) {
    if (!s || !out_json) return fail_invalid("sufficient_n_json: bad arguments");
    return guarded([&] {
        AlgorithmParams alg = AlgorithmParams::defaults(s->params.alpha, shifted != 0);
        if (lambda > 0.0) alg.lambda = lambda;
        if (delta > 0.0) alg.delta = delta;
        const double cc = c > 0.0 ? c : 6.0;
        const uint64_t n = sufficient_n(eps, s->params, alg, shifted != 0, cc);
        nlohmann::json j{{"eps", eps},       {"n", n},
                         {"lambda", alg.lambda}, {"delta", alg.delta},
                         {"constant_c", cc}, {"shifted", shifted != 0},
                         {"dims", s->params.d}, {"alpha", s->params.alpha}};
        *out_json = dup_string(j.dump());
        return RLAT_OK;
    });
}

rlat_status rlat_fit_rate(const double* n_values, const double* errors, int32_t count,
                          double* out_slope, double* out_intercept, double* out_stderr) {
    if (!n_values || !errors || count < 1 || !out_slope || !out_intercept || !out_stderr)
        return fail_invalid("fit_rate: bad arguments");
    return guarded([&] {
        const RateFit fit =
            fit_rate(std::span<const double>(n_values, static_cast<size_t>(count)),
                     std::span<const double>(errors, static_cast<size_t>(count)));
        *out_slope = fit.slope;
        *out_intercept = fit.intercept;
        *out_stderr = fit.slope_stderr;
        return RLAT_OK;
    });
}

rlat_status rlat_experiment_run(const char* config_json, char** out_csv,
                                char** out_summary_json) {
    if (!config_json || !out_csv || !out_summary_json)
        return fail_invalid("experiment_run: bad arguments");
    return guarded([&] {
        const auto cfg = ExperimentConfig::from_json(nlohmann::json::parse(config_json));
        const ExperimentResult result = run_experiment(cfg);
        *out_csv = dup_string(records_csv(result));
        *out_summary_json = dup_string(summary_json(cfg, result).dump(2));
        return RLAT_OK;
    });
}

rlat_status rlat_verify_run(int32_t quick, int32_t* out_all_passed, char** out_report_json) {
    if (!out_all_passed || !out_report_json) return fail_invalid("verify_run: bad arguments");
    return guarded([&] {
        VerifyOptions opt;
        opt.quick = quick != 0;
        const VerifyReport report = run_verify_suite(opt);
        *out_all_passed = report.all_passed ? 1 : 0;
        *out_report_json = dup_string(report.to_json().dump(2));
        return RLAT_OK;
    });
}

}  // extern "C"
