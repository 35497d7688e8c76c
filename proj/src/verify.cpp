#include "verify.hpp"

#include <cmath>
#include <sstream>

#include "primes.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "testfns.hpp"
#include "util.hpp"

namespace randlat {

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"all_passed", all_passed}, {"checks", arr}};
}

namespace {

struct Ctx {
    const VerifyOptions& opt;
    VerifyReport& report;

    MeritResult merit(const LatticeRule& rule, int beta, const Weights& w) const {
        if (opt.merit_closed) return opt.merit_closed(rule, beta, w);
        return p_merit_closed(rule, beta, w);
    }

    void add(const std::string& name, bool passed, const std::string& detail) {
        report.checks.push_back({name, passed, detail});
        report.all_passed = report.all_passed && passed;
    }
};

std::string fmt_instance(uint64_t p, std::span<const uint64_t> z) {
    std::ostringstream os;
    os << "p=" << p << " z=(";
    for (size_t i = 0; i < z.size(); ++i) os << (i ? "," : "") << z[i];
    os << ")";
    return os.str();
}

void check_zeta_product(Ctx& ctx) {
    struct Case {
        int d;
        double beta;
        std::vector<double> g;
        int64_t trunc;
    };
    std::vector<Case> cases;
    if (ctx.opt.quick) {
        cases = {{1, 2.0, {1.0}, 2000}};
    } else {
        for (double beta : {2.0, 4.0}) {
            cases.push_back({1, beta, {1.0}, 100000});
            cases.push_back({2, beta, {1.0, 0.5}, 3000});
        }
    }
    for (const auto& c : cases) {
        const Weights w(c.g);
        const auto interval = sum_inverse_r_box(c.beta, w, c.d, c.trunc);
        const double target = v_d(c.beta, w, c.d) / 3.0;
        const bool ok = interval.lower <= target && target <= interval.upper;
        std::ostringstream os;
        os << "d=" << c.d << " beta=" << c.beta << " -> [" << interval.lower << ", "
           << interval.upper << "] target " << target;
        ctx.add("zeta_product_sum", ok, os.str());
        if (!ok) return;
    }
}

void check_divisor_counts(Ctx& ctx) {
    const std::vector<uint64_t> primes = ctx.opt.quick ? std::vector<uint64_t>{3, 5}
                                                       : std::vector<uint64_t>{3, 5, 7, 11};
    const int dmax = ctx.opt.quick ? 2 : 3;
    const int64_t hmax = ctx.opt.quick ? 3 : 6;
    for (uint64_t p : primes) {
        for (int d = 1; d <= dmax; ++d) {
            std::vector<int64_t> h(static_cast<size_t>(d), -hmax);
            bool done = false;
            while (!done) {
                bool zero = true;
                for (int64_t v : h) zero = zero && v == 0;
                if (!zero) {
                    // brute-force count over all z
                    uint64_t brute = 0;
                    std::vector<uint64_t> z(static_cast<size_t>(d), 1);
                    bool zdone = false;
                    while (!zdone) {
                        int64_t s = 0;
                        for (int j = 0; j < d; ++j)
                            s += h[static_cast<size_t>(j)] * static_cast<int64_t>(z[static_cast<size_t>(j)]);
                        const int64_t pp = static_cast<int64_t>(p);
                        if (((s % pp) + pp) % pp == 0) ++brute;
                        int j = d - 1;
                        while (j >= 0) {
                            if (++z[static_cast<size_t>(j)] < p) break;
                            z[static_cast<size_t>(j)] = 1;
                            --j;
                        }
                        if (j < 0) zdone = true;
                    }
                    const uint64_t closed = divisor_count(p, h);
                    if (closed != brute) {
                        std::ostringstream os;
                        os << "p=" << p << " h=(";
                        for (int j = 0; j < d; ++j) os << (j ? "," : "") << h[static_cast<size_t>(j)];
                        os << "): closed " << closed << " vs brute " << brute;
                        ctx.add("divisor_count_exact", false, os.str());
                        return;
                    }
                }
                int j = d - 1;
                while (j >= 0) {
                    if (++h[static_cast<size_t>(j)] <= hmax) break;
                    h[static_cast<size_t>(j)] = -hmax;
                    --j;
                }
                if (j < 0) done = true;
            }
        }
    }
    ctx.add("divisor_count_exact", true, "closed form matches enumeration on the full grid");
}

void check_sublevel_count(Ctx& ctx) {
    RngStream rng(77, 0);
    const int trials = ctx.opt.quick ? 8 : 40;
    for (int t = 0; t < trials; ++t) {
        const int d = 1 + static_cast<int>(rng.next_below(3));
        std::vector<double> g;
        double prev = 1.0;
        for (int j = 0; j < d; ++j) {
            prev = prev * (0.3 + 0.7 * rng.next_double());
            g.push_back(prev);
        }
        const Weights w(g);
        const double beta = 1.5 + 3.0 * rng.next_double();
        const double threshold = std::pow(10.0, 3.0 * rng.next_double());
        const int64_t count = count_small_r(beta, w, d, threshold);
        const double bound = threshold * v_d(beta, w, d);
        if (static_cast<double>(count) > bound) {
            std::ostringstream os;
            os << "d=" << d << " beta=" << beta << " T=" << threshold << ": |A|=" << count
               << " > T V_d=" << bound;
            ctx.add("sublevel_count_bound", false, os.str());
            return;
        }
    }
    ctx.add("sublevel_count_bound", true, "|A(T)| <= T V_d on randomized instances");
}

// exhaustive z grids shared by the averaging and abundance checks
struct MeritGrid {
    uint64_t p;
    int d;
    int beta;
    std::vector<double> g;
};

std::vector<MeritGrid> merit_grids(bool quick) {
    std::vector<MeritGrid> grids;
    const std::vector<uint64_t> primes = quick ? std::vector<uint64_t>{3} : std::vector<uint64_t>{3, 5, 7};
    const std::vector<int> dims = quick ? std::vector<int>{1} : std::vector<int>{1, 2};
    for (uint64_t p : primes) {
        for (int d : dims) {
            for (int beta : {2, 4}) {
                grids.push_back({p, d, beta, std::vector<double>(static_cast<size_t>(d), 1.0)});
                std::vector<double> g{1.0};
                if (d == 2) g.push_back(0.5);
                grids.push_back({p, d, beta, g});
            }
        }
    }
    return grids;
}

template <class Fn>
void for_all_z(uint64_t p, int d, Fn&& fn) {
    std::vector<uint64_t> z(static_cast<size_t>(d), 1);
    bool done = false;
    while (!done) {
        fn(z);
        int j = d - 1;
        while (j >= 0) {
            if (++z[static_cast<size_t>(j)] < p) break;
            z[static_cast<size_t>(j)] = 1;
            --j;
        }
        if (j < 0) done = true;
    }
}

void check_prop1_and_abundance(Ctx& ctx) {
    for (const auto& grid : merit_grids(ctx.opt.quick)) {
        const Weights w(grid.g);
        const double v = v_d(grid.beta, w, grid.d);
        KahanSum total;
        uint64_t cells = 0, good = 0;
        const double threshold = 2.0 * v / static_cast<double>(grid.p);
        for_all_z(grid.p, grid.d, [&](const std::vector<uint64_t>& z) {
            const MeritResult m = ctx.merit(LatticeRule(grid.p, z), grid.beta, w);
            total.add(m.value);
            ++cells;
            if (m.value <= threshold) ++good;
        });
        const double average = total.value() / static_cast<double>(cells);
        std::ostringstream os;
        os << "p=" << grid.p << " d=" << grid.d << " beta=" << grid.beta;
        if (!(average < v / static_cast<double>(grid.p))) {
            os << ": average " << average << " !< " << v / static_cast<double>(grid.p);
            ctx.add("merit_average_bound", false, os.str());
            return;
        }
        const uint64_t needed = (cells + 1) / 2;  // ceil(tau (p-1)^d), tau = 1/2
        if (good < needed) {
            os << ": only " << good << " of " << cells << " pass (need " << needed << ")";
            ctx.add("good_vector_abundance", false, os.str());
            return;
        }
    }
    ctx.add("merit_average_bound", true, "exhaustive averages stay below V_d / p");
    ctx.add("good_vector_abundance", true, "at least half of all z pass the 2 V_d / p test");
}

void check_zaremba(Ctx& ctx) {
    bool ok = true;
    std::string detail = "1/rho < P on every exhaustive instance";
    for (const auto& grid : merit_grids(ctx.opt.quick)) {
        const Weights w(grid.g);
        for_all_z(grid.p, grid.d, [&](const std::vector<uint64_t>& z) {
            if (!ok) return;
            LatticeRule rule(grid.p, z);
            SpaceParams space(grid.d, static_cast<double>(grid.beta), w);
            const double rho = rho_index(rule, space);
            const double pval = p_merit_closed(rule, grid.beta, w).value;
            if (!(1.0 / rho < pval)) {
                std::ostringstream os;
                os << fmt_instance(grid.p, z) << " beta=" << grid.beta << ": 1/rho=" << 1.0 / rho
                   << " !< P=" << pval;
                detail = os.str();
                ok = false;
            }
        });
    }
    ctx.add("zaremba_inequality", ok, detail);
}

void check_oracle_equivalence(Ctx& ctx) {
    RngStream rng(101, 0);
    const int trials = ctx.opt.quick ? 5 : 50;
    const std::vector<uint64_t> primes{3, 5, 7, 11, 13};
    for (int t = 0; t < trials; ++t) {
        const uint64_t p = primes[rng.next_below(primes.size())];
        const int d = 1 + static_cast<int>(rng.next_below(3));
        const int beta = rng.next_below(2) == 0 ? 2 : 4;
        std::vector<uint64_t> z(static_cast<size_t>(d));
        for (auto& zj : z) zj = 1 + rng.next_below(p - 1);
        std::vector<double> g;
        double prev = 1.0;
        for (int j = 0; j < d; ++j) {
            prev = prev * (0.4 + 0.6 * rng.next_double());
            g.push_back(prev);
        }
        const Weights w(g);
        LatticeRule rule(p, z);
        const MeritResult closed = ctx.merit(rule, beta, w);
        const MeritResult oracle = p_merit_oracle(rule, beta, w, 60);
        const double diff = closed.value - oracle.value;
        if (diff < -1e-11 || diff > oracle.tail_bound + 1e-11) {
            std::ostringstream os;
            os << fmt_instance(p, z) << " beta=" << beta << ": closed " << closed.value
               << " oracle " << oracle.value << " tail " << oracle.tail_bound;
            ctx.add("merit_oracle_equivalence", false, os.str());
            return;
        }
    }
    ctx.add("merit_oracle_equivalence", true,
            "closed form within the certified oracle interval on random instances");
}

void check_worst_case(Ctx& ctx) {
    RngStream rng(7, 0);
    const int trials = ctx.opt.quick ? 3 : 20;
    const auto primes = primes_between(5, 97);
    for (int t = 0; t < trials; ++t) {
        const uint64_t p = primes[rng.next_below(primes.size())];
        const int d = 1 + static_cast<int>(rng.next_below(3));
        std::vector<uint64_t> z(static_cast<size_t>(d));
        for (auto& zj : z) zj = 1 + rng.next_below(p - 1);
        std::vector<double> g{1.0};
        for (int j = 1; j < d; ++j) g.push_back(g.back() * 0.7);
        SpaceParams space(d, 1.0, Weights(g));
        LatticeRule rule(p, z);
        TestFunction f = worst_case_fn(rule, space);
        const double wce = worst_case_error(rule, space);
        const double err = std::abs(rule.apply(f.evaluator) - f.exact_integral);
        if (std::abs(err - wce) > 1e-9 * wce) {
            std::ostringstream os;
            os << fmt_instance(p, z) << ": |Q(f)-I| = " << err << " vs e^wor = " << wce;
            ctx.add("worst_case_equality", false, os.str());
            return;
        }
    }
    ctx.add("worst_case_equality", true, "attained worst-case error matches sqrt(P) to 1e-9");
}

void check_lower_bound(Ctx& ctx) {
    const std::vector<uint64_t> ns = ctx.opt.quick ? std::vector<uint64_t>{10}
                                                   : std::vector<uint64_t>{10, 20, 50};
    RngStream rng(11, 0);
    for (uint64_t n : ns) {
        for (double alpha : {0.0, 1.0}) {
            SpaceParams space(2, alpha, Weights({1.0, 0.5}));
            TestFunction f = lower_bound_fn(n, space);
            const auto pool = modulus_pool(n);
            KahanSum mean_err;
            const int reps = ctx.opt.quick ? 4 : 12;
            for (int rep = 0; rep < reps; ++rep) {
                const uint64_t p = pool[rng.next_below(pool.size())];
                std::vector<uint64_t> z{1 + rng.next_below(p - 1), 1 + rng.next_below(p - 1)};
                LatticeRule rule(p, z);
                const double expected =
                    space.weights.at(0) /
                    (std::pow(static_cast<double>(p), alpha) * std::sqrt(static_cast<double>(pool.size())));
                const double err = std::abs(rule.apply(f.evaluator) - f.exact_integral);
                if (std::abs(err - expected) > 1e-12) {
                    std::ostringstream os;
                    os << "n=" << n << " alpha=" << alpha << " " << fmt_instance(p, z)
                       << ": |Q(f_n)| = " << err << " expected " << expected;
                    ctx.add("lower_bound_formula", false, os.str());
                    return;
                }
                mean_err.add(err);
            }
            const double bound = space.weights.at(0) * std::sqrt(std::log(static_cast<double>(n))) /
                                 (2.0 * std::pow(static_cast<double>(n), alpha + 0.5));
            if (mean_err.value() / reps < bound) {
                std::ostringstream os;
                os << "n=" << n << " alpha=" << alpha << ": mean error " << mean_err.value() / reps
                   << " below theoretical floor " << bound;
                ctx.add("lower_bound_formula", false, os.str());
                return;
            }
        }
    }
    ctx.add("lower_bound_formula", true,
            "per-rule error matches gamma_1/(p^alpha sqrt(#pool)); means above the floor");
}

void check_omega_bound(Ctx& ctx) {
    const uint64_t n = 10;  // single prime p = 7
    const int dmax = ctx.opt.quick ? 1 : 2;
    for (int d = 1; d <= dmax; ++d) {
        SpaceParams space(d, 2.0, Weights(std::vector<double>(static_cast<size_t>(d), 1.0)));
        auto member = [&](const LatticeRule& rule) {
            return acceptance_test(rule.p(), rule.z(), space, 1.0);
        };
        std::vector<int64_t> h(static_cast<size_t>(d), -8);
        bool done = false;
        while (!done) {
            bool zero = true;
            for (int64_t v : h) zero = zero && v == 0;
            if (!zero) {
                const OmegaResult om = omega_weight(n, h, space, member);
                bool all_div = true;
                for (int64_t v : h) all_div = all_div && (((v % 7) + 7) % 7 == 0);
                const double bound = (all_div ? 1.0 : 0.0) + 4.0 / static_cast<double>(n);
                if (!om.exact || om.value > bound + 1e-12) {
                    std::ostringstream os;
                    os << "d=" << d << " h=(";
                    for (int j = 0; j < d; ++j) os << (j ? "," : "") << h[static_cast<size_t>(j)];
                    os << "): omega = " << om.value << " bound " << bound;
                    ctx.add("omega_bound", false, os.str());
                    return;
                }
            }
            int j = d - 1;
            while (j >= 0) {
                if (++h[static_cast<size_t>(j)] <= 8) break;
                h[static_cast<size_t>(j)] = -8;
                --j;
            }
            if (j < 0) done = true;
        }
    }
    ctx.add("omega_bound", true, "omega_n(h) <= 1(h = 0 mod p) + 4/n on the exhaustive grid");
}

}  // namespace

VerifyReport run_verify_suite(const VerifyOptions& options) {
    VerifyReport report;
    Ctx ctx{options, report};
    check_zeta_product(ctx);
    check_divisor_counts(ctx);
    check_sublevel_count(ctx);
    check_prop1_and_abundance(ctx);
    check_zaremba(ctx);
    check_oracle_equivalence(ctx);
    check_worst_case(ctx);
    check_lower_bound(ctx);
    check_omega_bound(ctx);
    return report;
}

}  // namespace randlat
