#include "mdp/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdp {

std::string phase_event_name(PhaseEvent e) {
    switch (e) {
        case PhaseEvent::none: return "none";
        case PhaseEvent::good: return "good";
        case PhaseEvent::dangerous: return "dangerous";
        case PhaseEvent::overshoot: return "overshoot";
        case PhaseEvent::fallback: return "fallback";
    }
    return "?";
}

std::vector<long> cm_phase_schedule(long n) {
    if (n < 100) throw config_error("cm: horizon must be at least 100");
    double logn = std::log(static_cast<double>(n));
    std::vector<long> t;
    long used = 0;
    double pw = 9.0;
    while (true) {
        double tj = std::ceil(pw * logn);
        if (tj > static_cast<double>(n - used)) break;
        t.push_back(static_cast<long>(tj));
        used += static_cast<long>(tj);
        pw *= 9.0;
    }
    if (t.empty()) throw config_error("cm: horizon too small for one phase");
    t.back() += n - used;  // final phase absorbs the residual
    return t;
}

namespace {

// Scale-corrected subgaussian constant: policies invert raw (unscaled)
// demand means, so observation noise is inflated by 1/range_scale.
double effective_csg(const DemandModel& model, const NoiseModel& noise) {
    return noise.c_sg / model.range_scale;
}

// Extrema of p*(theta) over a 1-d interval, via closed-form-at-grid scan.
void price_range_over_interval(const DemandModel& model, double lo, double hi,
                               double* pmin, double* pmax) {
    const int grid = 512;
    *pmin = 1e300;
    *pmax = -1e300;
    for (int i = 0; i <= grid; ++i) {
        double th = lo + (hi - lo) * i / grid;
        std::vector<double> t = {th};
        double p = optimal_price(model.family, t, model.price_domain);
        *pmin = std::min(*pmin, p);
        *pmax = std::max(*pmax, p);
    }
}

class CmPolicy final : public Policy {
  public:
    CmPolicy(const DemandModel& model, long n, const NoiseModel& noise)
        : model_(model),
          schedule_(cm_phase_schedule(n)),
          csg_(effective_csg(model, noise)),
          rounds_left_(schedule_[0]) {
        if (model.crossing_k != 0)
            throw config_error("cm: requires a 0-crossing family");
        if (model.constants.c2 <= 0)
            throw config_error("cm: model lacks a certified c2");
        price_ = model.price_domain.hi;
    }

    double next_price() override { return price_; }

    void observe(double realized_demand) override {
        demand_sum_ += realized_demand;
        if (--rounds_left_ > 0) return;
        close_phase();
    }

    const std::string& name() const override {
        static const std::string n = "cm";
        return n;
    }
    const std::vector<ConfidenceState>& phase_log() const override {
        return log_;
    }

  private:
    void close_phase() {
        long tj = schedule_[static_cast<size_t>(phase_)];
        double mean_raw = demand_sum_ / tj / model_.range_scale;
        rounds_done_ += tj;
        ++phase_;
        demand_sum_ = 0;
        rounds_left_ = phase_ < static_cast<int>(schedule_.size())
                           ? schedule_[static_cast<size_t>(phase_)]
                           : 1;  // exhausted; engine stops at n anyway

        ConfidenceState st;
        st.phase = phase_;
        st.round_end = rounds_done_;
        // Width from the exact (unceiled) schedule t_j = 9^j log n, so
        // successive widths contract by exactly 1/3.
        st.width = 4.0 * model_.constants.c2 * csg_ *
                   std::pow(3.0, -static_cast<double>(phase_));
        std::vector<double> price = {price_};
        std::vector<double> value = {mean_raw};
        try {
            st.theta_hat =
                inverse_profile(model_.family, model_.param_box, price, value);
        } catch (const model_error&) {
            st.event = PhaseEvent::fallback;
            st.next_price = price_;
            log_.push_back(st);
            return;
        }
        st.theta_lo = st.theta_hat[0] - st.width;
        st.theta_hi = st.theta_hat[0] + st.width;
        const Interval& box = model_.param_box[0];
        double lo = std::max(st.theta_lo, box.lo);
        double hi = std::min(st.theta_hi, box.hi);
        double pmin = 0, pmax = 0;
        price_range_over_interval(model_, lo, hi, &pmin, &pmax);
        st.price_lo = std::max(0.0, pmin);
        st.price_hi = std::min(1.0, pmax);
        price_ = std::min(pmax, price_);  // conservative candidate, truncated
        st.next_price = price_;
        log_.push_back(st);
    }

    DemandModel model_;
    std::vector<long> schedule_;
    double csg_;
    int phase_ = 0;
    long rounds_left_;
    long rounds_done_ = 0;
    double demand_sum_ = 0;
    double price_ = 1.0;
    std::vector<ConfidenceState> log_;
};

class IcmPolicy final : public Policy {
  public:
    IcmPolicy(const DemandModel& model, long n, const NoiseModel& noise,
              const IcmTuning& tuning)
        : model_(model), tuning_(tuning), k_(model.crossing_k),
          csg_(effective_csg(model, noise)),
          logn_(std::log(static_cast<double>(n))) {
        if (k_ < 1) throw config_error("icm: requires crossing number k >= 1");
        if (model.constants.c2 <= 0 || model.constants.c_star <= 0)
            throw config_error("icm: model lacks certified constants");
        if (tuning.exploration_rounds(k_) > n)
            throw config_error("icm: tuned schedule exceeds horizon");
        price_ = model.price_domain.hi;
        begin_phase();
    }

    double next_price() override {
        if (exploiting_) return price_;
        return phase_top_ - step_ * tuning_.h;
    }

    void observe(double realized_demand) override {
        if (exploiting_) return;
        sums_[static_cast<size_t>(step_)] += realized_demand;
        if (++count_ < per_price_) return;
        count_ = 0;
        price_ = phase_top_ - step_ * tuning_.h;
        if (++step_ <= k_) return;
        close_phase();
    }

    const std::string& name() const override {
        static const std::string n = "icm";
        return n;
    }
    const std::vector<ConfidenceState>& phase_log() const override {
        return log_;
    }

  private:
    void begin_phase() {
        if (phase_ >= tuning_.m || phase_top_ - k_ * tuning_.h < 0.0) {
            exploiting_ = true;
            return;
        }
        per_price_ = tuning_.n_schedule[static_cast<size_t>(phase_)];
        sums_.assign(static_cast<size_t>(k_) + 1, 0.0);
        step_ = 0;
        count_ = 0;
    }

    void close_phase() {
        ++phase_;
        double floor_price = phase_top_ - k_ * tuning_.h;
        ConfidenceState st;
        st.phase = phase_;
        std::vector<double> prices(static_cast<size_t>(k_) + 1);
        std::vector<double> means(static_cast<size_t>(k_) + 1);
        for (int i = 0; i <= k_; ++i) {
            prices[static_cast<size_t>(i)] = phase_top_ - i * tuning_.h;
            means[static_cast<size_t>(i)] =
                sums_[static_cast<size_t>(i)] / per_price_ / model_.range_scale;
        }
        st.width = 2.0 * model_.constants.c_star * model_.constants.c2 * csg_ *
                   std::pow(tuning_.h, -k_) *
                   std::sqrt((k_ + 1) * logn_ / per_price_);
        try {
            st.theta_hat =
                inverse_profile(model_.family, model_.param_box, prices, means);
        } catch (const model_error&) {
            st.event = PhaseEvent::fallback;
            st.next_price = price_ = floor_price;
            exploiting_ = true;
            log_.push_back(st);
            return;
        }
        double phat = optimal_price(model_.family, st.theta_hat, model_.price_domain);
        st.price_lo = std::max(0.0, phat - st.width);
        st.price_hi = std::min(1.0, phat + st.width);
        if (st.price_hi < floor_price) {
            st.event = PhaseEvent::good;
            price_ = phase_top_ = st.price_hi;
        } else if (st.price_lo <= floor_price) {
            st.event = PhaseEvent::dangerous;
            price_ = phase_top_ = floor_price;
        } else {
            st.event = PhaseEvent::overshoot;
            price_ = floor_price;
            exploiting_ = true;
        }
        st.next_price = price_;
        log_.push_back(st);
        if (!exploiting_) begin_phase();
    }

    DemandModel model_;
    IcmTuning tuning_;
    int k_;
    double csg_;
    double logn_;
    int phase_ = 0;
    double phase_top_ = 1.0;
    long per_price_ = 0;
    int step_ = 0;
    long count_ = 0;
    std::vector<double> sums_;
    bool exploiting_ = false;
    double price_ = 1.0;
    std::vector<ConfidenceState> log_;
};

class MleGreedyPolicy final : public Policy {
  public:
    explicit MleGreedyPolicy(const DemandModel& model) : model_(model) {
        if (model.family != Family::linear || model.crossing_k != 0)
            throw config_error("mle_greedy: implemented for the linear family");
        price_ = model.price_domain.hi;
    }

    double next_price() override { return price_; }

    void observe(double realized_demand) override {
        double raw = realized_demand / model_.range_scale;
        // Least squares for d = 1 - a p: a = sum p(1-D) / sum p^2.
        sum_p2_ += price_ * price_;
        sum_p_resid_ += price_ * (1.0 - raw);
        double a = model_.param_box[0].clamp(sum_p_resid_ / sum_p2_);
        std::vector<double> th = {a};
        double next = optimal_price(model_.family, th, model_.price_domain);
        if (next > price_ + 1e-12) ++increases_;
        price_ = next;
    }

    const std::string& name() const override {
        static const std::string n = "mle_greedy";
        return n;
    }
    bool is_markdown() const override { return false; }
    long price_increase_count() const override { return increases_; }

  private:
    DemandModel model_;
    double price_;
    double sum_p2_ = 0, sum_p_resid_ = 0;
    long increases_ = 0;
};

class FixedPolicy final : public Policy {
  public:
    explicit FixedPolicy(double price, std::string name)
        : price_(price), name_(std::move(name)) {
        if (price < 0.0 || price > 1.0)
            throw config_error("fixed: price must lie in [0,1]");
    }
    double next_price() override { return price_; }
    void observe(double) override {}
    const std::string& name() const override { return name_; }

  private:
    double price_;
    std::string name_;
};

class FaultyPolicy final : public Policy {
  public:
    double next_price() override {
        ++round_;
        if (round_ <= 3) return 1.0;
        if (round_ == 4) return 0.5;
        return 0.9;  // deliberate violation
    }
    void observe(double) override {}
    const std::string& name() const override {
        static const std::string n = "faulty";
        return n;
    }

  private:
    long round_ = 0;
};

}  // namespace

std::unique_ptr<Policy> make_cm_policy(const DemandModel& model, long n,
                                       const NoiseModel& noise) {
    return std::make_unique<CmPolicy>(model, n, noise);
}

std::unique_ptr<Policy> make_icm_policy(const DemandModel& model, long n,
                                        const NoiseModel& noise,
                                        const IcmTuning& tuning) {
    return std::make_unique<IcmPolicy>(model, n, noise, tuning);
}

std::unique_ptr<Policy> make_mle_greedy_policy(const DemandModel& model) {
    return std::make_unique<MleGreedyPolicy>(model);
}

std::unique_ptr<Policy> make_fixed_policy(double price) {
    return std::make_unique<FixedPolicy>(price, "fixed");
}

std::unique_ptr<Policy> make_oracle_policy(const DemandModel& model) {
    return std::make_unique<FixedPolicy>(model.optimal_price(), "oracle");
}

std::unique_ptr<Policy> make_faulty_markdown_policy() {
    return std::make_unique<FaultyPolicy>();
}

std::unique_ptr<Policy> make_policy(const std::string& spec,
                                    const DemandModel& model, long n,
                                    const NoiseModel& noise) {
    if (spec == "cm") return make_cm_policy(model, n, noise);
    if (spec == "icm") {
        int m = std::min(6, static_cast<int>(
                                std::ceil(std::log(static_cast<double>(n)))));
        IcmTuning t = solve_lp(n, model.crossing_k, model.sensitivity_s,
                               std::max(1, m));
        return make_icm_policy(model, n, noise, t);
    }
    if (spec == "mle_greedy") return make_mle_greedy_policy(model);
    if (spec == "oracle") return make_oracle_policy(model);
    if (spec == "faulty") return make_faulty_markdown_policy();
    if (spec.rfind("fixed:", 0) == 0) {
        size_t pos = 0;
        double p = std::stod(spec.substr(6), &pos);
        if (pos != spec.size() - 6)
            throw config_error("fixed: malformed price: " + spec);
        return make_fixed_policy(p);
    }
    throw config_error("unknown policy: " + spec);
}

}  // namespace mdp
