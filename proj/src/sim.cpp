#include "mdp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace mdp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

double Trajectory::total_regret() const {
    double s = 0;
    for (double r : per_round_regret) s += r;
    return s;
}

std::vector<double> Trajectory::prefix_regret() const {
    std::vector<double> out;
    out.reserve(per_round_regret.size());
    double s = 0;
    for (double r : per_round_regret) out.push_back(s += r);
    return out;
}

Trajectory simulate(Policy& policy, const DemandModel& model,
                    const NoiseModel& noise, long n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("simulate: n >= 1 required");
    Trajectory traj;
    traj.prices.reserve(static_cast<size_t>(n));
    traj.demands.reserve(static_cast<size_t>(n));
    traj.per_round_regret.reserve(static_cast<size_t>(n));
    double rstar = model.optimal_revenue();
    double prev_price = 2.0;  // above any admissible price
    size_t phases_seen = 0;
    for (long t = 0; t < n; ++t) {
        double p = policy.next_price();
        if (p > prev_price + kPriceTolerance) {
            if (policy.is_markdown())
                throw invariant_violation(
                    "markdown policy raised its price at round " +
                    std::to_string(t + 1));
            ++traj.meta.price_increase_count;
        }
        prev_price = p;
        double mean = model.mean_demand(p);
        double d = sample_demand(mean, noise, rng);
        policy.observe(d);
        traj.prices.push_back(p);
        traj.demands.push_back(d);
        // Expected regret from the true revenue curve, not realized revenue.
        traj.per_round_regret.push_back(rstar - p * mean);
        const auto& log = policy.phase_log();
        if (log.size() > phases_seen) {
            for (; phases_seen < log.size(); ++phases_seen) {
                traj.meta.phase_boundaries.push_back(t + 1);
                traj.meta.events.push_back(log[phases_seen].event);
            }
        }
    }
    traj.meta.policy = policy.name();
    traj.meta.family = model.family;
    traj.meta.theta = model.theta;
    traj.meta.n = n;
    if (policy.price_increase_count() > traj.meta.price_increase_count)
        traj.meta.price_increase_count = policy.price_increase_count();
    return traj;
}

Trajectory simulate(const std::string& policy_spec, const DemandModel& model,
                    const NoiseModel& noise, long n, uint64_t master_seed,
                    uint64_t run_index, uint64_t replication_index) {
    auto policy = make_policy(policy_spec, model, n, noise);
    RngStream rng(master_seed, run_index, replication_index);
    Trajectory traj = simulate(*policy, model, noise, n, rng);
    traj.meta.master_seed = master_seed;
    traj.meta.run_index = run_index;
    traj.meta.replication_index = replication_index;
    return traj;
}

void write_trajectory(std::ostream& os, const Trajectory& traj,
                      const std::string& config_hash) {
    os << "# policy=" << traj.meta.policy << "\n";
    os << "# family=" << family_name(traj.meta.family) << "\n";
    os << "# theta=";
    for (size_t i = 0; i < traj.meta.theta.size(); ++i)
        os << (i ? "," : "") << fmt(traj.meta.theta[i]);
    os << "\n";
    os << "# n=" << traj.meta.n << "\n";
    os << "# seed=" << traj.meta.master_seed << "\n";
    os << "# run=" << traj.meta.run_index << "\n";
    os << "# replication=" << traj.meta.replication_index << "\n";
    os << "# config_hash=" << config_hash << "\n";
    os << "# price_increases=" << traj.meta.price_increase_count << "\n";
    os << "# phase_boundaries=";
    for (size_t i = 0; i < traj.meta.phase_boundaries.size(); ++i)
        os << (i ? "," : "") << traj.meta.phase_boundaries[i];
    os << "\n";
    os << "# events=";
    for (size_t i = 0; i < traj.meta.events.size(); ++i)
        os << (i ? "," : "") << phase_event_name(traj.meta.events[i]);
    os << "\n";
    double cum = 0;
    for (size_t t = 0; t < traj.prices.size(); ++t) {
        cum += traj.per_round_regret[t];
        os << (t + 1) << "," << fmt(traj.prices[t]) << ","
           << fmt(traj.demands[t]) << "," << fmt(cum) << "\n";
    }
}

namespace {

DemandModel randomized_model(const DemandModel& base, RngStream& rng) {
    DemandModel m = base;
    // Middle 80% of the box avoids boundary-optimal corners.
    for (size_t i = 0; i < m.theta.size(); ++i) {
        const Interval& iv = m.param_box[i];
        double lo = iv.lo + 0.1 * iv.width();
        double hi = iv.hi - 0.1 * iv.width();
        m.theta[i] = lo + rng.uniform01() * (hi - lo);
    }
    m.finalize();
    return m;
}

double quantile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return 0;
    double pos = q * (sorted.size() - 1);
    size_t i = static_cast<size_t>(pos);
    size_t j = std::min(i + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(i);
    return sorted[i] * (1 - frac) + sorted[j] * frac;
}

}  // namespace

BatchResult run_batch(const BatchSpec& spec) {
    if (spec.replications < 1)
        throw std::invalid_argument("run_batch: replications >= 1");
    BatchResult out;
    out.regrets.resize(static_cast<size_t>(spec.replications));
    out.price_increase_counts.resize(static_cast<size_t>(spec.replications));
    for (int rep = 0; rep < spec.replications; ++rep) {
        // One stream per replication index: results do not depend on the
        // order in which this loop body runs.
        RngStream rng(spec.master_seed, spec.run_index,
                      static_cast<uint64_t>(rep));
        DemandModel model =
            spec.randomize_theta ? randomized_model(spec.model, rng) : spec.model;
        auto policy = make_policy(spec.policy, model, spec.n, spec.noise);
        Trajectory traj = simulate(*policy, model, spec.noise, spec.n, rng);
        out.regrets[static_cast<size_t>(rep)] = traj.total_regret();
        out.price_increase_counts[static_cast<size_t>(rep)] =
            traj.meta.price_increase_count;
        if (traj.meta.price_increase_count > 0 && policy->is_markdown())
            ++out.monotonicity_violations;
        for (PhaseEvent e : traj.meta.events)
            if (e == PhaseEvent::overshoot) {
                ++out.overshoot_count;
                break;
            }
    }
    double sum = 0;
    for (double r : out.regrets) sum += r;
    out.mean = sum / spec.replications;
    double ss = 0;
    for (double r : out.regrets) ss += (r - out.mean) * (r - out.mean);
    out.stderr_mean =
        spec.replications > 1
            ? std::sqrt(ss / (spec.replications - 1) / spec.replications)
            : 0.0;
    std::vector<double> sorted = out.regrets;
    std::sort(sorted.begin(), sorted.end());
    out.q05 = quantile(sorted, 0.05);
    out.q50 = quantile(sorted, 0.50);
    out.q95 = quantile(sorted, 0.95);
    return out;
}

}  // namespace mdp
