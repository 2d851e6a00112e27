#pragma once

#include <string>
#include <vector>

#include "mdp/sim.hpp"

// Scaling studies (regret-rate fits), the CM vs greedy separation study, and
// KL diagnostics for the lower-bound fixtures.

namespace mdp {

enum class FitTransform { log_n, log_log_n };

struct FitResult {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

// OLS of log(regret) on log(n) (log_n) or log(log(n)) (log_log_n). Requires
// >= 4 points with positive regrets; throws std::invalid_argument otherwise.
FitResult fit_scaling_exponent(const std::vector<std::pair<double, double>>& points,
                               FitTransform transform);

struct ScalingCell {
    long n = 0;
    double mean_regret = 0;
    double stderr_mean = 0;
    double ratio = 0;  // mean / reference rate (log^2 n or n^{k/(k+1)})
};

struct ScalingResult {
    std::string study;
    int k = 0;
    std::vector<ScalingCell> cells;
    FitResult fit;
};

// Bernoulli KL divergence in nats. Means at 0 or 1 can make the divergence
// infinite; that is returned as +inf with *infinite set when provided.
double kl_bernoulli(double mu0, double mu1, bool* infinite = nullptr);

// max over the price grid of KL between the two models' Bernoulli demands.
double max_kl(const DemandModel& m0, const DemandModel& m1,
              const std::vector<double>& price_grid);

struct SeparationRow {
    long n = 0;
    double cm_mean = 0, cm_stderr = 0, cm_ratio = 0;      // regret / log^2 n
    double mle_mean = 0, mle_stderr = 0, mle_ratio = 0;   // regret / log n
    double mle_increase_frac = 0;  // fraction of reps with >= 1 price increase
};

struct SeparationReport {
    std::vector<SeparationRow> rows;
    FitResult cm_fit;   // log_log_n transform
    FitResult mle_fit;  // log_n transform
};

// CM and the least-squares greedy baseline on the 0-crossing linear family,
// theta drawn near the hard end of the box each replication.
SeparationReport separation_study(const std::vector<long>& n_grid,
                                  int replications, uint64_t master_seed,
                                  double noise_sigma);

// ICM on a degree-k polynomial family with randomized theta; fits the regret
// exponent against log n. Rejects k outside {1,2}.
ScalingResult icm_rate_study(int k, int s, const std::vector<long>& n_grid,
                             int replications, uint64_t master_seed,
                             double noise_sigma);

// CM scaling study against the log^2 n rate (log_log_n fit).
ScalingResult cm_rate_study(const std::vector<long>& n_grid, int replications,
                            uint64_t master_seed, double noise_sigma);

std::string format_scaling_report(const ScalingResult& r);
std::string format_separation_report(const SeparationReport& r);

}  // namespace mdp
