#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mdp/demand.hpp"
#include "mdp/noise.hpp"
#include "mdp/tuning.hpp"

// Sequential pricing policies behind one interface: the markdown CM and ICM
// policies, the unconstrained least-squares greedy baseline, and fixed-price
// references.

namespace mdp {

class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class PhaseEvent { none, good, dangerous, overshoot, fallback };
std::string phase_event_name(PhaseEvent e);

// Per-phase confidence state, recorded when a phase closes.
struct ConfidenceState {
    int phase = 0;
    std::vector<double> theta_hat;
    double width = 0;                    // w_j
    double theta_lo = 0, theta_hi = 0;   // CM: interval on theta (unclipped)
    double price_lo = 0, price_hi = 1;   // interval on the optimal price
    PhaseEvent event = PhaseEvent::none;
    long round_end = 0;                  // 1-based round at which the phase closed
    double next_price = 1;
};

class Policy {
  public:
    virtual ~Policy() = default;

    // Price for the upcoming round; the engine then feeds back the realized
    // demand via observe(). Prices depend on past observations only.
    virtual double next_price() = 0;
    virtual void observe(double realized_demand) = 0;

    virtual const std::string& name() const = 0;
    virtual bool is_markdown() const { return true; }
    virtual long price_increase_count() const { return 0; }
    virtual const std::vector<ConfidenceState>& phase_log() const {
        static const std::vector<ConfidenceState> kEmpty;
        return kEmpty;
    }
};

// Phase lengths t_j = ceil(9^j ln n) with sum <= n; the final phase absorbs
// the residual rounds. Throws config_error for n < 100 or if no phase fits.
std::vector<long> cm_phase_schedule(long n);

// Cautious Myopic policy for 0-crossing families: one price per phase,
// confidence interval on theta, next price = largest optimal price of any
// surviving parameter, truncated to preserve monotonicity.
std::unique_ptr<Policy> make_cm_policy(const DemandModel& model, long n,
                                       const NoiseModel& noise);

// Iterative Cautious Myopic policy for crossing number k >= 1 with a tuned
// (m, h, n_1..n_m) schedule. Throws config_error if the schedule exceeds n.
std::unique_ptr<Policy> make_icm_policy(const DemandModel& model, long n,
                                        const NoiseModel& noise,
                                        const IcmTuning& tuning);

// Certainty-equivalent least-squares greedy baseline (not a markdown
// policy): re-estimates theta each round and plays the estimated optimal
// price unclipped.
std::unique_ptr<Policy> make_mle_greedy_policy(const DemandModel& model);

std::unique_ptr<Policy> make_fixed_policy(double price);
std::unique_ptr<Policy> make_oracle_policy(const DemandModel& model);

// Deliberately violates the markdown contract after a few rounds; used by
// negative tests of the engine's invariant check.
std::unique_ptr<Policy> make_faulty_markdown_policy();

// Roster names: cm | icm | mle_greedy | fixed:<p> | oracle | faulty.
std::unique_ptr<Policy> make_policy(const std::string& spec,
                                    const DemandModel& model, long n,
                                    const NoiseModel& noise);

}  // namespace mdp
