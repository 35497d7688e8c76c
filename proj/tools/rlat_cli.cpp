// rlat: command-line front end for the randlat shared library.
// Subcommands: integrate, converge, verify, cbc, sufficient-n, merit, points.
// Exit codes: 0 success, 1 check/run failure, 2 configuration error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randlat/randlat.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

struct StringOut {
    char* ptr = nullptr;
    ~StringOut() { rlat_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct SpaceHandle {
    rlat_space* ptr = nullptr;
    ~SpaceHandle() { rlat_space_destroy(ptr); }
};

struct RuleHandle {
    rlat_rule* ptr = nullptr;
    ~RuleHandle() { rlat_rule_destroy(ptr); }
};

[[noreturn]] void die_config(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(kExitConfigError);
}

void check(rlat_status st, const char* what) {
    if (st != RLAT_OK) {
        std::cerr << "error: " << what << ": " << rlat_status_name(st) << ": "
                  << rlat_last_error() << "\n";
        std::exit(st == RLAT_ERR_INVALID_ARGUMENT || st == RLAT_ERR_BAD_CONFIG
                      ? kExitConfigError
                      : kExitCheckFailed);
    }
}

std::vector<double> parse_gammas(const std::string& spec, int dims) {
    std::vector<double> g;
    if (spec.rfind("const:", 0) == 0) {
        g.assign(static_cast<size_t>(dims), std::stod(spec.substr(6)));
    } else if (spec.rfind("power:", 0) == 0) {
        const double e = std::stod(spec.substr(6));
        for (int j = 1; j <= dims; ++j) g.push_back(std::pow(static_cast<double>(j), -e));
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) g.push_back(std::stod(item));
    }
    if (static_cast<int>(g.size()) < dims)
        die_config("gammas expand to fewer than dims entries");
    g.resize(static_cast<size_t>(dims));
    return g;
}

SpaceHandle make_space(int dims, double alpha, const std::string& gammas) {
    const auto g = parse_gammas(gammas, dims);
    SpaceHandle s;
    check(rlat_space_create(dims, alpha, g.data(), static_cast<int32_t>(g.size()), &s.ptr),
          "space");
    return s;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) die_config("cannot open output file " + path);
    out << content;
}

std::vector<uint64_t> parse_z(const std::string& spec) {
    std::vector<uint64_t> z;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) z.push_back(std::stoull(item));
    if (z.empty()) die_config("empty generating vector");
    return z;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randomized rank-1 lattice cubature"};
    app.require_subcommand(0, 1);
    bool verify_flag = false;
    app.add_flag("--verify", verify_flag, "run the verification suite (same as the verify subcommand)");

    // shared options
    int dims = 1;
    double alpha = 1.0;
    std::string gammas = "const:1.0";
    double lambda = 0.0, delta = 0.0;
    uint64_t seed = 1;
    std::string out_path;
    bool shifted = false;
    bool relaxed = false;

    auto add_space_opts = [&](CLI::App* cmd) {
        cmd->add_option("--dims", dims, "dimension d");
        cmd->add_option("--alpha", alpha, "smoothness alpha");
        cmd->add_option("--gammas", gammas,
                        "weights: comma list, const:x, or power:e");
    };

    // integrate
    auto* integrate = app.add_subcommand("integrate", "one randomized draw and estimate");
    uint64_t n_budget = 64;
    std::string testfn_json = R"({"kind":"product_kernel","kernel_alpha":1})";
    int try_cap = 64;
    add_space_opts(integrate);
    integrate->add_option("--n", n_budget, "evaluation budget n");
    integrate->add_option("--lambda", lambda, "lambda for the relaxed accepted set");
    integrate->add_option("--seed", seed, "RNG seed");
    integrate->add_option("--testfn", testfn_json, "test function descriptor (JSON)");
    integrate->add_option("--try-cap", try_cap, "rejection try cap");
    integrate->add_flag("--shifted", shifted, "add a uniform random shift");
    integrate->add_flag("--relaxed", relaxed, "use the single-lambda accepted set");
    integrate->add_option("--out", out_path, "output path (default stdout)");

    // converge
    auto* converge = app.add_subcommand("converge", "replicated convergence experiment");
    std::string config_path;
    std::string summary_path;
    std::string n_grid_spec;
    int reps = 0;
    std::string testfn_flag;
    converge->add_option("--config", config_path, "JSON config file");
    add_space_opts(converge);
    converge->add_option("--n-grid", n_grid_spec, "comma-separated n values");
    converge->add_option("--reps", reps, "replications per n");
    converge->add_option("--lambda", lambda, "reported lambda");
    converge->add_option("--delta", delta, "reported delta");
    converge->add_option("--seed", seed, "RNG seed");
    converge->add_option("--testfn", testfn_flag, "test function descriptor (JSON)");
    converge->add_flag("--shifted", shifted, "shifted variant");
    converge->add_flag("--relaxed", relaxed, "single-lambda accepted set");
    converge->add_option("--out", out_path, "CSV output path");
    converge->add_option("--summary", summary_path, "summary JSON path (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    bool quick = false;
    verify->add_flag("--quick", quick, "small grid, sub-second");
    verify->add_option("--out", out_path, "report path (default stdout)");

    // cbc
    auto* cbc = app.add_subcommand("cbc", "component-by-component baseline vector");
    uint64_t p_value = 0;
    add_space_opts(cbc);
    cbc->add_option("--p", p_value, "prime modulus")->required();
    cbc->add_option("--out", out_path, "output path (default stdout)");

    // sufficient-n
    auto* suffn = app.add_subcommand("sufficient-n", "evaluation budget for target accuracy");
    double eps = 0.1, c_const = 6.0;
    add_space_opts(suffn);
    suffn->add_option("--eps", eps, "target accuracy in (0,1)")->required();
    suffn->add_option("--lambda", lambda, "lambda");
    suffn->add_option("--delta", delta, "delta");
    suffn->add_option("--c", c_const, "absolute constant of the bound");
    suffn->add_flag("--shifted", shifted, "shifted-algorithm path");
    suffn->add_option("--out", out_path, "output path (default stdout)");

    // merit
    auto* merit = app.add_subcommand("merit", "P / rho / worst-case error of one rule");
    std::string z_spec;
    double beta = 0.0;
    int64_t trunc = 0;
    add_space_opts(merit);
    merit->add_option("--p", p_value, "prime modulus")->required();
    merit->add_option("--z", z_spec, "generating vector, comma-separated")->required();
    merit->add_option("--beta", beta, "P exponent (defaults to 2*alpha)");
    merit->add_option("--trunc", trunc, "oracle truncation (when beta is not 2,4,6)");
    merit->add_option("--out", out_path, "output path (default stdout)");

    // points
    auto* points = app.add_subcommand("points", "export the node set of one rule");
    points->add_option("--p", p_value, "prime modulus")->required();
    points->add_option("--z", z_spec, "generating vector, comma-separated")->required();
    points->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    if (app.get_subcommands().empty()) {
        if (!verify_flag) {
            std::cerr << app.help();
            return kExitConfigError;
        }
        int32_t all_passed = 0;
        StringOut report;
        check(rlat_verify_run(0, &all_passed, &report.ptr), "verify");
        write_output(out_path, report.str());
        return all_passed ? kExitOk : kExitCheckFailed;
    }

    if (integrate->parsed()) {
        SpaceHandle space = make_space(dims, alpha, gammas);
        double re = 0, im = 0;
        StringOut rec;
        check(rlat_integrate_once(n_budget, space.ptr, lambda, try_cap, shifted ? 1 : 0,
                                  relaxed ? 1 : 0, seed, 0, testfn_json.c_str(), &re, &im,
                                  &rec.ptr),
              "integrate");
        json j{{"estimate", {{"re", re}, {"im", im}}}, {"record", json::parse(rec.str())}};
        write_output(out_path, j.dump(2));
        return kExitOk;
    }

    if (converge->parsed()) {
        json cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) die_config("cannot read config file " + config_path);
            try {
                in >> cfg;
            } catch (const std::exception& e) {
                die_config(std::string("config parse: ") + e.what());
            }
        } else {
            cfg = json::object();
        }
        // flags override file values
        if (!cfg.contains("space")) cfg["space"] = json::object();
        auto& sp = cfg["space"];
        if (converge->count("--dims") || !sp.contains("dims")) sp["dims"] = dims;
        if (converge->count("--alpha") || !sp.contains("alpha")) sp["alpha"] = alpha;
        if (converge->count("--gammas") || !sp.contains("gammas"))
            sp["gammas"] = parse_gammas(gammas, sp["dims"].get<int>());
        if (!cfg.contains("alg")) cfg["alg"] = json::object();
        if (converge->count("--lambda")) cfg["alg"]["lambda"] = lambda;
        if (converge->count("--delta")) cfg["alg"]["delta"] = delta;
        if (converge->count("--seed") || !cfg.contains("seed")) cfg["seed"] = seed;
        if (converge->count("--shifted")) cfg["shifted"] = true;
        if (converge->count("--relaxed")) cfg["relaxed"] = true;
        if (converge->count("--reps") || !cfg.contains("replications"))
            cfg["replications"] = reps > 0 ? reps : 10;
        if (!n_grid_spec.empty()) {
            std::vector<uint64_t> grid;
            std::stringstream ss(n_grid_spec);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) grid.push_back(std::stoull(item));
            cfg["n_grid"] = grid;
        }
        if (!cfg.contains("n_grid")) die_config("converge needs --n-grid or a config file");
        if (!testfn_flag.empty()) {
            try {
                cfg["testfn"] = json::parse(testfn_flag);
            } catch (const std::exception& e) {
                die_config(std::string("testfn parse: ") + e.what());
            }
        }

        StringOut csv, summary;
        check(rlat_experiment_run(cfg.dump().c_str(), &csv.ptr, &summary.ptr), "converge");
        if (out_path.empty()) {
            std::cout << csv.str();
            if (!summary_path.empty()) write_output(summary_path, summary.str());
        } else {
            write_output(out_path, csv.str());
            write_output(summary_path, summary.str());
        }
        return kExitOk;
    }

    if (verify->parsed()) {
        int32_t all_passed = 0;
        StringOut report;
        check(rlat_verify_run(quick ? 1 : 0, &all_passed, &report.ptr), "verify");
        write_output(out_path, report.str());
        return all_passed ? kExitOk : kExitCheckFailed;
    }

    if (cbc->parsed()) {
        SpaceHandle space = make_space(dims, alpha, gammas);
        StringOut result;
        check(rlat_cbc_construct(p_value, space.ptr, &result.ptr), "cbc");
        write_output(out_path, result.str());
        return kExitOk;
    }

    if (suffn->parsed()) {
        SpaceHandle space = make_space(dims, alpha, gammas);
        StringOut report;
        check(rlat_sufficient_n_json(eps, space.ptr, lambda, delta, shifted ? 1 : 0, c_const,
                                     &report.ptr),
              "sufficient-n");
        write_output(out_path, json::parse(report.str()).dump(2));
        return kExitOk;
    }

    if (merit->parsed()) {
        const auto z = parse_z(z_spec);
        dims = static_cast<int>(z.size());
        SpaceHandle space = make_space(dims, alpha, gammas);
        RuleHandle rule;
        check(rlat_rule_create(p_value, z.data(), static_cast<int32_t>(z.size()), &rule.ptr),
              "rule");
        const double use_beta = merit->count("--beta") ? beta : 2.0 * alpha;
        StringOut mj;
        check(rlat_merit_json(rule.ptr, space.ptr, use_beta, trunc, &mj.ptr), "merit");
        json j = json::parse(mj.str());
        double rho = 0, wce = 0;
        if (alpha > 0.0) {
            check(rlat_rho_index(rule.ptr, space.ptr, &rho), "rho");
            j["rho"] = rho;
        }
        check(rlat_worst_case_error(rule.ptr, space.ptr, &wce), "worst-case error");
        j["worst_case_error"] = wce;
        write_output(out_path, j.dump(2));
        return kExitOk;
    }

    if (points->parsed()) {
        const auto z = parse_z(z_spec);
        RuleHandle rule;
        check(rlat_rule_create(p_value, z.data(), static_cast<int32_t>(z.size()), &rule.ptr),
              "rule");
        StringOut text;
        check(rlat_rule_points_text(rule.ptr, &text.ptr), "points");
        write_output(out_path, text.str());
        return kExitOk;
    }

    return kExitConfigError;
}
