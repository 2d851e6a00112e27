#include "mdp/demand.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "mdp/linalg.hpp"

namespace mdp {

namespace {

constexpr double kDomainTol = 1e-9;

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double uniform_in(std::mt19937_64& eng, const Interval& iv) {
    return iv.lo + uniform01(eng) * iv.width();
}

double l1_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::linear: return "linear";
        case Family::exponential: return "exponential";
        case Family::logit: return "logit";
        case Family::polynomial: return "polynomial";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "linear") return Family::linear;
    if (name == "exponential") return Family::exponential;
    if (name == "logit") return Family::logit;
    if (name == "polynomial") return Family::polynomial;
    throw model_error("unknown family: " + name);
}

double eval_demand(Family family, std::span<const double> theta, double p,
                   const Interval& price_domain) {
    if (p < price_domain.lo - kDomainTol || p > price_domain.hi + kDomainTol)
        throw std::domain_error("eval_demand: price outside domain");
    switch (family) {
        case Family::linear:
            return 1.0 - theta[0] * p;
        case Family::exponential:
            return std::exp(1.0 - theta[0] * p);
        case Family::logit: {
            double e = std::exp(1.0 - theta[0] * p);
            return e / (1.0 + e);
        }
        case Family::polynomial: {
            double v = 0;
            for (size_t j = theta.size(); j-- > 0;) v = v * p + theta[j];
            return v;
        }
    }
    return 0;
}

double omega_root() {
    // t + e^t = 0 on [-1, 0]; monotone increasing.
    double lo = -1.0, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (mid + std::exp(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Zeros of r'(p) = sum (j+1) theta_j p^j inside [lo, hi], found by sign-change
// bisection on a scan grid; used for polynomial degrees >= 3.
std::vector<double> revenue_stationary_points(std::span<const double> theta,
                                              double lo, double hi) {
    auto rp = [&](double p) {
        double v = 0;
        for (size_t j = theta.size(); j-- > 0;)
            v = v * p + static_cast<double>(j + 1) * theta[j];
        return v;
    };
    std::vector<double> roots;
    const int grid = 512;
    double prev = rp(lo);
    for (int i = 1; i <= grid; ++i) {
        double p = lo + (hi - lo) * i / grid;
        double cur = rp(p);
        if (prev == 0.0) roots.push_back(lo + (hi - lo) * (i - 1) / grid);
        if (prev * cur < 0) {
            double a = lo + (hi - lo) * (i - 1) / grid, b = p;
            for (int it = 0; it < 100; ++it) {
                double m = 0.5 * (a + b);
                (rp(a) * rp(m) <= 0 ? b : a) = m;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev = cur;
    }
    return roots;
}

}  // namespace

double optimal_price(Family family, std::span<const double> theta,
                     const Interval& price_domain, bool* boundary) {
    double p = 0;
    bool closed = true;
    switch (family) {
        case Family::linear:
            p = 1.0 / (2.0 * theta[0]);
            break;
        case Family::exponential:
            p = 1.0 / theta[0];
            break;
        case Family::logit:
            p = (1.0 - omega_root()) / theta[0];
            break;
        case Family::polynomial: {
            size_t m = theta.size();
            if (m == 1) {
                p = theta[0] >= 0 ? price_domain.hi : price_domain.lo;
            } else if (m == 2) {
                p = -theta[0] / (2.0 * theta[1]);
            } else {
                std::vector<double> cand =
                    revenue_stationary_points(theta, price_domain.lo, price_domain.hi);
                cand.push_back(price_domain.lo);
                cand.push_back(price_domain.hi);
                double best = price_domain.lo, best_r = -1e300;
                for (double c : cand) {
                    double r = c * eval_demand(family, theta, c, price_domain);
                    if (r > best_r) {
                        best_r = r;
                        best = c;
                    }
                }
                p = best;
                closed = false;
            }
            break;
        }
    }
    bool clipped = false;
    if (closed) {
        if (p < price_domain.lo || p > price_domain.hi) {
            clipped = true;
            p = price_domain.clamp(p);
        }
    } else {
        clipped = (p <= price_domain.lo + kDomainTol || p >= price_domain.hi - kDomainTol);
    }
    if (boundary) *boundary = clipped;
    return p;
}

double optimal_price_grid(Family family, std::span<const double> theta,
                          const Interval& price_domain) {
    const int grid = 2048;
    auto rev = [&](double p) {
        return p * eval_demand(family, theta, p, price_domain);
    };
    int best_i = 0;
    double best_r = -1e300;
    for (int i = 0; i <= grid; ++i) {
        double p = price_domain.lo + price_domain.width() * i / grid;
        double r = rev(p);
        if (r > best_r) {
            best_r = r;
            best_i = i;
        }
    }
    double a = price_domain.lo +
               price_domain.width() * std::max(0, best_i - 1) / grid;
    double b = price_domain.lo +
               price_domain.width() * std::min(grid, best_i + 1) / grid;
    // Golden-section refinement.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = rev(c), fd = rev(d);
    while (b - a > 1e-10) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = rev(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = rev(d);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> profile(Family family, std::span<const double> theta,
                            std::span<const double> prices,
                            const Interval& price_domain) {
    std::vector<double> y;
    y.reserve(prices.size());
    for (double p : prices) y.push_back(eval_demand(family, theta, p, price_domain));
    return y;
}

std::vector<double> inverse_profile(Family family, const Box& param_box,
                                    std::span<const double> prices,
                                    std::span<const double> values) {
    if (prices.size() != values.size())
        throw model_error("inverse_profile: size mismatch");
    std::vector<double> theta;
    switch (family) {
        case Family::linear:
            theta = {(1.0 - values[0]) / prices[0]};
            break;
        case Family::exponential: {
            if (values[0] <= 0)
                throw inconsistency_error("inverse_profile: nonpositive demand");
            theta = {(1.0 - std::log(values[0])) / prices[0]};
            break;
        }
        case Family::logit: {
            if (values[0] <= 0 || values[0] >= 1)
                throw inconsistency_error("inverse_profile: demand outside (0,1)");
            theta = {(1.0 + std::log((1.0 - values[0]) / values[0])) / prices[0]};
            break;
        }
        case Family::polynomial: {
            if (prices.size() != param_box.size())
                throw model_error("inverse_profile: need dim(theta) prices");
            if (prices.size() >= 2 && dispersion(prices) < kSingularDispersion)
                throw conditioning_error("inverse_profile: degenerate prices");
            theta = solve_vandermonde(prices, values);
            break;
        }
    }
    if (theta.size() != param_box.size())
        throw model_error("inverse_profile: box dimension mismatch");
    double diam = 0;
    for (const auto& iv : param_box) diam += iv.width();
    for (size_t i = 0; i < theta.size(); ++i) {
        const Interval& iv = param_box[i];
        double overshoot =
            std::max(iv.lo - theta[i], theta[i] - iv.hi);
        if (overshoot > 10.0 * std::max(diam, 1e-12))
            throw inconsistency_error("inverse_profile: solution far outside box");
        theta[i] = iv.clamp(theta[i]);
    }
    return theta;
}

double DemandModel::raw_demand(double p) const {
    return eval_demand(family, theta, p, price_domain);
}

void DemandModel::finalize() {
    if (theta.size() != param_box.size())
        throw model_error("model: theta/box dimension mismatch");
    for (size_t i = 0; i < theta.size(); ++i)
        if (theta[i] < param_box[i].lo - kDomainTol ||
            theta[i] > param_box[i].hi + kDomainTol)
            throw model_error("model: theta outside param_box");
    bool clipped = false;
    opt_price_ = mdp::optimal_price(family, theta, price_domain, &clipped);
    boundary_optimal = clipped;
    opt_revenue_ = revenue(opt_price_);
}

// --- certified constants -----------------------------------------------

namespace {

struct ConstantsKey {
    Family family;
    int k;
    std::vector<double> box_edges;
    bool operator<(const ConstantsKey& o) const {
        if (family != o.family) return family < o.family;
        if (k != o.k) return k < o.k;
        return box_edges < o.box_edges;
    }
};

}  // namespace

CertifiedConstants certify_constants(Family family, const Box& param_box,
                                     int k, const Interval& price_domain,
                                     int samples, unsigned seed,
                                     double min_dispersion) {
    std::mt19937_64 eng(seed);
    CertifiedConstants out;
    int dim = static_cast<int>(param_box.size());
    std::vector<double> ta(dim), tb(dim), prices(static_cast<size_t>(k) + 1);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < dim; ++i) {
            ta[i] = uniform_in(eng, param_box[i]);
            tb[i] = uniform_in(eng, param_box[i]);
        }
        double h = 1.0;
        for (int tries = 0;; ++tries) {
            for (auto& p : prices) p = uniform_in(eng, price_domain);
            if (prices.size() < 2) break;
            h = dispersion(prices);
            if (h >= min_dispersion) break;
            if (tries > 200) {
                h = 0;
                break;
            }
        }
        if (prices.size() >= 2 && h < min_dispersion) continue;

        auto ya = profile(family, ta, prices, price_domain);
        auto yb = profile(family, tb, prices, price_domain);
        double dy = l1_dist(ya, yb);
        if (dy > 1e-12) {
            // Round-trip the profiles so the ratio measures the inverse map.
            auto ra = inverse_profile(family, param_box, prices, ya);
            auto rb = inverse_profile(family, param_box, prices, yb);
            double ratio = l1_dist(ra, rb) * std::pow(h, k) / dy;
            out.c2_raw = std::max(out.c2_raw, ratio);
        }
        double dt = l1_dist(ta, tb);
        if (dt > 1e-12) {
            double pa = optimal_price(family, ta, price_domain);
            double pb = optimal_price(family, tb, price_domain);
            out.c_star_raw = std::max(out.c_star_raw, std::abs(pa - pb) / dt);
        }
    }
    out.c2 = 1.5 * out.c2_raw;
    out.c_star = 1.5 * out.c_star_raw;
    return out;
}

namespace {

// Factories share certified constants per (family, k); certification is
// randomized but fixed-seeded, so the cache is deterministic.
const CertifiedConstants& cached_constants(Family family, const Box& box, int k,
                                           const Interval& domain) {
    static std::map<ConstantsKey, CertifiedConstants> cache;
    static std::mutex mu;
    ConstantsKey key{family, k, {}};
    for (const auto& iv : box) {
        key.box_edges.push_back(iv.lo);
        key.box_edges.push_back(iv.hi);
    }
    std::lock_guard<std::mutex> lock(mu);
    auto [it, fresh] = cache.try_emplace(std::move(key));
    if (fresh)
        it->second = certify_constants(family, box, k, domain, 100000, 20240201u);
    return it->second;
}

DemandModel finish(DemandModel m, bool certified = true) {
    if (certified) {
        const CertifiedConstants& c =
            cached_constants(m.family, m.param_box, m.crossing_k, m.price_domain);
        m.constants.c2 = c.c2;
        m.constants.c_star = c.c_star;
    }
    m.finalize();
    return m;
}

}  // namespace

DemandModel make_linear(double a) {
    DemandModel m;
    m.family = Family::linear;
    m.theta = {a};
    m.param_box = {{0.5, 1.0}};
    m.price_domain = {0.5, 1.0};
    m.crossing_k = 0;
    return finish(std::move(m));
}

DemandModel make_exponential(double a) {
    DemandModel m;
    m.family = Family::exponential;
    m.theta = {a};
    m.param_box = {{0.5, 0.75}};
    m.price_domain = {0.5, 1.0};
    m.crossing_k = 0;
    m.range_scale = std::exp(-0.75);  // max of e^{1-ap} over the boxes is e^{3/4}
    return finish(std::move(m));
}

DemandModel make_logit(double a) {
    DemandModel m;
    m.family = Family::logit;
    m.theta = {a};
    m.param_box = {{0.5, 1.0}};
    m.price_domain = {0.5, 1.0};
    m.crossing_k = 0;
    return finish(std::move(m));
}

Box standard_poly_box(int k) {
    // Boxes keep demand in [0,1], strictly decreasing, with an interior
    // revenue maximum throughout the middle 80% of the box.
    if (k == 1) return {{0.6, 0.8}, {-0.6, -0.4}};
    if (k == 2) return {{0.75, 0.9}, {-0.75, -0.6}, {0.02, 0.1}};
    throw model_error("standard_poly_box: only k=1,2 have standard boxes");
}

DemandModel make_polynomial(std::span<const double> theta, Box box) {
    if (theta.empty()) throw model_error("make_polynomial: empty theta");
    DemandModel m;
    m.family = Family::polynomial;
    m.theta.assign(theta.begin(), theta.end());
    m.param_box = std::move(box);
    m.price_domain = {0.0, 1.0};
    m.crossing_k = static_cast<int>(theta.size()) - 1;
    return finish(std::move(m));
}

DemandModel make_polynomial(std::span<const double> theta) {
    return make_polynomial(theta, standard_poly_box(static_cast<int>(theta.size()) - 1));
}

double lower_bound_delta(long t, long n) {
    return std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(t));
}

DemandModel make_lower_bound_family_k0(long t, long n) {
    double logn = std::log(static_cast<double>(n));
    if (static_cast<double>(t) < logn || t >= n)
        throw model_error("lower-bound instance: need log n <= t < n");
    double delta = lower_bound_delta(t, n);
    if (delta >= 0.5)
        throw model_error("lower-bound instance: delta_t >= 1/2");
    DemandModel m;
    m.family = Family::linear;
    m.theta = {1.0 - 2.0 * delta};
    m.param_box = {{1e-6, 1.0}};
    m.price_domain = {0.0, 1.0};
    m.crossing_k = 0;
    return finish(std::move(m), /*certified=*/false);
}

std::pair<DemandModel, DemandModel> make_polynomial_pair(int k) {
    if (k < 1) throw model_error("make_polynomial_pair: k >= 1");
    auto build = [&](std::vector<double> theta, Interval domain,
                     double scale) {
        DemandModel m;
        m.family = Family::polynomial;
        m.theta = std::move(theta);
        m.param_box.reserve(m.theta.size());
        for (double c : m.theta) m.param_box.push_back({c - 1.0, c + 1.0});
        m.price_domain = domain;
        m.crossing_k = k;
        m.range_scale = scale;
        m.finalize();
        return m;
    };
    if (k == 1) {
        // Explicit pair on [1/2, 1]; shared scale keeps demands in [0,1].
        double scale = 1.0 / 6.0;
        return {build({6.0, -5.0}, {0.5, 1.0}, scale),
                build({2.0, -1.0}, {0.5, 1.0}, scale)};
    }
    // D(x) = 2 - x + c (1-x)^k on [0,1], the M-rescaled form of
    // D(M-h) = 1 + h/M + (c M^{-k}) h^k with M = 4.
    const double M = 4.0;
    double cb = 1.0;  // b = M^{-k} times M^k
    double cr = std::pow(2.0, k + 1);  // r = 2^{k+1} M^{-k} times M^k
    auto expand = [&](double c) {
        // 2 - x + c(1-x)^k as monomial coefficients.
        std::vector<double> th(static_cast<size_t>(k) + 1, 0.0);
        th[0] = 2.0;
        th[1] = -1.0;
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            // (1-x)^k = sum_j C(k,j) (-x)^j
            th[static_cast<size_t>(j)] += c * binom * ((j % 2) ? -1.0 : 1.0);
            binom = binom * (k - j) / (j + 1);
        }
        return th;
    };
    (void)M;
    double scale = 1.0 / (2.0 + cr);  // D_r(0) is the pair's maximum demand
    return {build(expand(cr), {0.0, 1.0}, scale),
            build(expand(cb), {0.0, 1.0}, scale)};
}

// --- identifiability falsification ----------------------------------------

std::optional<Counterexample> falsify_identifiability(Family family,
                                                      const Box& param_box,
                                                      int k, int grid_res,
                                                      unsigned seed) {
    const Interval domain =
        family == Family::polynomial ? Interval{0.0, 1.0} : Interval{0.5, 1.0};
    int dim = static_cast<int>(param_box.size());
    int npoints = k + 1;
    std::mt19937_64 eng(seed);

    std::vector<double> prices(static_cast<size_t>(npoints));
    for (int i = 0; i < npoints; ++i)
        prices[i] = npoints == 1
                        ? 0.5 * (domain.lo + domain.hi)
                        : domain.lo + domain.width() * i / (npoints - 1);

    if (family == Family::polynomial && dim > npoints) {
        // Underdetermined interpolation: perturb theta along the coefficient
        // vector of q(p) = prod_i (p - p_i), which vanishes on the profile.
        std::vector<double> q = {1.0};
        for (double p : prices) {
            std::vector<double> nq(q.size() + 1, 0.0);
            for (size_t i = 0; i < q.size(); ++i) {
                nq[i + 1] += q[i];
                nq[i] -= p * q[i];
            }
            q = std::move(nq);
        }
        q.resize(static_cast<size_t>(dim), 0.0);
        std::vector<double> ta(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i)
            ta[i] = 0.5 * (param_box[i].lo + param_box[i].hi);
        double eps = 1e300;
        for (int i = 0; i < dim; ++i)
            if (q[i] != 0.0)
                eps = std::min(eps, 0.25 * param_box[i].width() / std::abs(q[i]));
        std::vector<double> tb = ta;
        for (int i = 0; i < dim; ++i) tb[i] += eps * q[i];
        Counterexample ce;
        ce.theta_a = ta;
        ce.theta_b = tb;
        ce.prices = prices;
        auto ya = profile(family, ta, prices, domain);
        auto yb = profile(family, tb, prices, domain);
        for (size_t i = 0; i < ya.size(); ++i)
            ce.profile_gap = std::max(ce.profile_gap, std::abs(ya[i] - yb[i]));
        ce.note = "underdetermined interpolation: dim(theta) exceeds probe count";
        return ce;
    }

    // Exhaustive pair search over a parameter grid (feasible for dim <= 2).
    long cells = 1;
    for (int i = 0; i < dim; ++i) cells *= grid_res;
    if (cells > 4096) cells = 4096;
    std::vector<std::vector<double>> thetas;
    thetas.reserve(static_cast<size_t>(cells));
    for (long c = 0; c < cells; ++c) {
        std::vector<double> th(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) th[i] = uniform_in(eng, param_box[i]);
        thetas.push_back(std::move(th));
    }
    for (size_t a = 0; a < thetas.size(); ++a) {
        auto ya = profile(family, thetas[a], prices, domain);
        for (size_t b = a + 1; b < thetas.size(); ++b) {
            if (l1_dist(thetas[a], thetas[b]) < 1e-6) continue;
            auto yb = profile(family, thetas[b], prices, domain);
            double gap = 0;
            for (size_t i = 0; i < ya.size(); ++i)
                gap = std::max(gap, std::abs(ya[i] - yb[i]));
            if (gap <= 1e-10) {
                Counterexample ce;
                ce.theta_a = thetas[a];
                ce.theta_b = thetas[b];
                ce.prices = prices;
                ce.profile_gap = gap;
                ce.note = "grid search";
                return ce;
            }
        }
    }
    return std::nullopt;
}

Counterexample lipschitz_counterexample(int k) {
    if (k < 1) throw model_error("lipschitz_counterexample: k >= 1");
    const double pi = std::acos(-1.0);
    Counterexample ce;
    ce.prices.resize(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i)
        ce.prices[static_cast<size_t>(i)] = static_cast<double>(i) / k;
    for (double p : ce.prices) {
        double fa = std::sin(k * pi * p) / (k * pi);
        double fb = std::sin(2 * k * pi * p) / (2 * k * pi);
        ce.profile_gap = std::max(ce.profile_gap, std::abs(fa - fb));
        ce.theta_a.push_back(fa);
        ce.theta_b.push_back(fb);
    }
    ce.note = "sin(k pi x)/(k pi) vs sin(2k pi x)/(2k pi): both profiles vanish";
    return ce;
}

}  // namespace mdp
