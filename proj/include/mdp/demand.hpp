#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Parametric demand families with crossing-number metadata: evaluation,
// profile inversion, optimal prices and the lower-bound fixture
// constructions.

namespace mdp {

struct Interval {
    double lo = 0, hi = 1;
    double width() const { return hi - lo; }
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

using Box = std::vector<Interval>;  // per-coordinate parameter domain

enum class Family { linear, exponential, logit, polynomial };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct FamilyConstants {
    double c2 = 0;      // robustness: ||inv(y)-inv(y')||_1 <= c2 h^{-k} ||y-y'||_1
    double c_star = 0;  // Lipschitz constant of theta -> p*(theta) in l1
    double c_s = 1.0;   // bound on |r^{(s)}| near p*
    double c_sg = 1.0;  // default subgaussian scale carried by the model
};

class model_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class conditioning_error : public model_error {
  public:
    using model_error::model_error;
};
class inconsistency_error : public model_error {
  public:
    using model_error::model_error;
};

// Static description of a family instance: everything except theta is
// family-level and visible to policies; theta is the unknown truth.
struct DemandModel {
    Family family = Family::linear;
    std::vector<double> theta;
    Box param_box;
    Interval price_domain{0.5, 1.0};
    int crossing_k = 0;
    int sensitivity_s = 2;
    FamilyConstants constants;
    // Demands are reported to the seller as range_scale * raw so that the
    // realized demand lives in [0,1]; the scale is part of the family
    // definition and known to policies.
    double range_scale = 1.0;
    bool boundary_optimal = false;

    // Raw family value d(p;theta) before range scaling.
    double raw_demand(double p) const;
    // Mean of the demand the seller observes, guaranteed in [0,1].
    double mean_demand(double p) const { return range_scale * raw_demand(p); }
    double revenue(double p) const { return p * mean_demand(p); }

    double optimal_price() const { return opt_price_; }
    double optimal_revenue() const { return opt_revenue_; }

    int dim() const { return static_cast<int>(theta.size()); }

    // Filled by finalize(); call after mutating theta.
    void finalize();

  private:
    double opt_price_ = 0;
    double opt_revenue_ = 0;
};

// Family-level evaluation with an explicit parameter vector.
double eval_demand(Family family, std::span<const double> theta, double p,
                   const Interval& price_domain);

// Optimal price of r(p)=p*d(p;theta) over the domain. Closed form where the
// family admits one, otherwise root-finding on r'. The result is clamped to
// the domain; *boundary is set when clamping was needed.
double optimal_price(Family family, std::span<const double> theta,
                     const Interval& price_domain, bool* boundary = nullptr);

// Independent numeric optimizer: 2048-point grid scan plus golden-section
// refinement to a 1e-10 bracket. Used as the oracle for derived values and
// for families without a closed form.
double optimal_price_grid(Family family, std::span<const double> theta,
                          const Interval& price_domain);

// Root of -t = e^t (enters the logit optimal price).
double omega_root();

// Invert the profile mapping: find theta with d(p_i;theta) = y_i. Values are
// raw (unscaled) demands. The solution is projected coordinate-wise onto the
// box; a solution further than 10x the box diameter raises
// inconsistency_error, near-singular nodes raise conditioning_error.
std::vector<double> inverse_profile(Family family, const Box& param_box,
                                    std::span<const double> prices,
                                    std::span<const double> values);

// The p-profile (d(p_0;theta), ..., d(p_k;theta)).
std::vector<double> profile(Family family, std::span<const double> theta,
                            std::span<const double> prices,
                            const Interval& price_domain);

// --- standard model factories -------------------------------------------

// d(x)=1-ax, a in [1/2,1], x in [1/2,1]. Crossing number 0.
DemandModel make_linear(double a);
// d(x)=e^{1-ax}, a in [1/2,3/4], x in [1/2,1]; boundary-optimal family.
DemandModel make_exponential(double a);
// d(x)=e^{1-ax}/(1+e^{1-ax}), a in [1/2,1], x in [1/2,1].
DemandModel make_logit(double a);
// Degree-k polynomial sum theta_j p^j on [0,1] with the module's standard
// parameter boxes for k=1,2; larger k uses an explicit box.
DemandModel make_polynomial(std::span<const double> theta);
DemandModel make_polynomial(std::span<const double> theta, Box box);
Box standard_poly_box(int k);

// Lower-bound instance d_t(p) = 1-(1-2*delta_t) p with delta_t =
// sqrt(log(n)/t), on the full domain [0,1]. Valid for log n <= t < n with
// delta_t < 1/2 (so the demand is decreasing); otherwise throws.
DemandModel make_lower_bound_family_k0(long t, long n);
double lower_bound_delta(long t, long n);

// The hard-to-test pair (D_r, D_b) of degree-k polynomials, rescaled to
// demands in [0,1]. first = D_r (interior optimum), second = D_b (optimum at
// the right endpoint).
std::pair<DemandModel, DemandModel> make_polynomial_pair(int k);

// --- identifiability falsification ----------------------------------------

struct Counterexample {
    std::vector<double> theta_a, theta_b;
    std::vector<double> prices;
    double profile_gap = 0;  // max-abs difference of the two profiles
    std::string note;
};

// Search for two distinct parameters with equal (k+1)-profiles. Absence of a
// counterexample means "not falsified at this resolution" only.
std::optional<Counterexample> falsify_identifiability(Family family,
                                                      const Box& param_box,
                                                      int k, int grid_res,
                                                      unsigned seed = 1234);

// The Lipschitz fixture: sin(k pi x)/(k pi) vs sin(2k pi x)/(2k pi) share a
// zero profile at p = (0, 1/k, ..., 1).
Counterexample lipschitz_counterexample(int k);

// --- constant certification ------------------------------------------------

struct CertifiedConstants {
    double c2_raw = 0, c2 = 0;          // empirical max ratio, and x1.5
    double c_star_raw = 0, c_star = 0;
};

// Randomized certification of c2 and c* by maximizing the defining ratios
// over `samples` draws; certified values are the empirical maxima inflated
// by 1.5. min_dispersion bounds the exploration-price draws away from
// degeneracy.
CertifiedConstants certify_constants(Family family, const Box& param_box,
                                     int k, const Interval& price_domain,
                                     int samples, unsigned seed,
                                     double min_dispersion = 0.05);

}  // namespace mdp
