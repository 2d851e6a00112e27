#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mdp/demand.hpp"
#include "mdp/noise.hpp"
#include "mdp/policy.hpp"

// Round-by-round simulation of (policy, model, noise) and replicated batch
// runs with exact expected-regret accounting: per-round regret is
// r* - r(X_t) from true means, so randomness enters only through the
// policy's decisions.

namespace mdp {

class invariant_violation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct TrajectoryMeta {
    std::string policy;
    Family family = Family::linear;
    std::vector<double> theta;
    long n = 0;
    uint64_t master_seed = 0;
    uint64_t run_index = 0, replication_index = 0;
    std::vector<long> phase_boundaries;  // round at which each phase closed
    std::vector<PhaseEvent> events;
    long price_increase_count = 0;
};

struct Trajectory {
    std::vector<double> prices;
    std::vector<double> demands;
    std::vector<double> per_round_regret;
    TrajectoryMeta meta;

    double total_regret() const;
    std::vector<double> prefix_regret() const;
};

// Run n rounds. A policy declaring is_markdown() that raises its price
// (beyond kPriceTolerance) triggers invariant_violation.
Trajectory simulate(Policy& policy, const DemandModel& model,
                    const NoiseModel& noise, long n, RngStream& rng);

// Convenience: build the policy from its roster name, seed the stream from
// (master_seed, run, rep).
Trajectory simulate(const std::string& policy_spec, const DemandModel& model,
                    const NoiseModel& noise, long n, uint64_t master_seed,
                    uint64_t run_index = 0, uint64_t replication_index = 0);

inline constexpr double kPriceTolerance = 1e-12;

// Header lines `# key=value`, then rows `t,price,demand,regret`; 17
// significant digits throughout.
void write_trajectory(std::ostream& os, const Trajectory& traj,
                      const std::string& config_hash);

struct BatchSpec {
    std::string policy;
    DemandModel model;
    NoiseModel noise;
    long n = 0;
    int replications = 1;
    uint64_t master_seed = 0;
    uint64_t run_index = 0;
    // Redraw theta per replication, uniform over the middle 80% of the
    // parameter box (studies use this; plain batches keep theta fixed).
    bool randomize_theta = false;
};

struct BatchResult {
    std::vector<double> regrets;  // one total per replication, in rep order
    double mean = 0;
    double stderr_mean = 0;
    double q05 = 0, q50 = 0, q95 = 0;
    long monotonicity_violations = 0;  // must stay 0 for markdown policies
    long overshoot_count = 0;          // replications ending in overshoot
    std::vector<long> price_increase_counts;
};

// Replications use independent streams keyed by replication index, so the
// result is identical however the loop is scheduled. Streams totals only;
// trajectories are not retained.
BatchResult run_batch(const BatchSpec& spec);

}  // namespace mdp
