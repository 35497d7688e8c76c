#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "korobov.hpp"
#include "sampler.hpp"

namespace randlat {

// Full description of a convergence run. Parsed from JSON; see README for
// the schema. `timing` off (the default) pins the CSV ms column to zero so
// identical configs produce byte-identical output.
struct ExperimentConfig {
    SpaceParams space;
    AlgorithmParams alg;
    std::vector<uint64_t> n_grid;
    int replications = 1;
    nlohmann::json testfn;
    bool shifted = false;
    uint64_t seed = 1;
    bool timing = false;
    ZpMode mode = ZpMode::full;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ExperimentRecord {
    uint64_t n = 0;
    int rep = 0;
    uint64_t p = 0;
    std::vector<uint64_t> z;
    std::optional<std::vector<double>> shift;
    std::complex<double> estimate;
    double abs_error = 0.0;
    double sq_error = 0.0;
    int tries = 0;
    uint64_t seed = 0;
    double ms = 0.0;
    bool failed = false;
};

struct NAggregate {
    uint64_t n = 0;
    double mean_abs_error = 0.0;
    double rmse = 0.0;
    double mean_tries = 0.0;
    int failures = 0;
};

struct ExperimentResult {
    std::vector<ExperimentRecord> records;
    std::vector<NAggregate> aggregates;
    bool estimates_real = true;
};

// R independent replications per grid point, each on its own RNG stream
// derived from (seed, n index, replication index). Draw failures are
// recorded, not fatal, unless every replication at some n fails.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Fixed schema: n,rep,p,z,shift,estimate,abs_error,sq_error,tries,seed,ms.
// z and shift are semicolon-joined; complex estimates are "re;im".
std::string records_csv(const ExperimentResult& result);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    int points_used = 0;
    uint64_t n_min = 0, n_max = 0;
};

// Ordinary least squares of log(err) against log(n). Non-positive errors
// are dropped; fewer than four usable points is an error.
RateFit fit_rate(std::span<const double> n_values, std::span<const double> errors);

// Smallest sufficient n for target accuracy eps from the tractability
// displays: the unshifted path takes the max of the 4*V_d floor and the
// eps-power term with constant C = (c 2^(3l-2d-1)/d) sqrt((l-d)/(l-d+1/2));
// the shifted path uses ceil((c/(alpha delta) (4 V)^lambda)^(1/e) eps^(-1/e))
// with e = lambda + 1/2 - delta*lambda/2. `c` is the configurable absolute
// constant; reports must print it.
uint64_t sufficient_n(double eps, const SpaceParams& space, const AlgorithmParams& alg,
                      bool shifted, double c = 6.0);

nlohmann::json summary_json(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace randlat
