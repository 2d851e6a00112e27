#include "mdp/experiments.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mdp {

FitResult fit_scaling_exponent(const std::vector<std::pair<double, double>>& points,
                               FitTransform transform) {
    if (points.size() < 4)
        throw std::invalid_argument("fit: need at least 4 points");
    std::vector<double> xs, ys;
    for (auto [n, regret] : points) {
        if (n <= 0 || regret <= 0)
            throw std::invalid_argument("fit: points must be positive");
        double x = std::log(n);
        if (transform == FitTransform::log_log_n) {
            if (x <= 0) throw std::invalid_argument("fit: need n > e for log log");
            x = std::log(x);
        }
        xs.push_back(x);
        ys.push_back(std::log(regret));
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

double kl_bernoulli(double mu0, double mu1, bool* infinite) {
    if (mu0 < 0 || mu0 > 1 || mu1 < 0 || mu1 > 1)
        throw std::invalid_argument("kl_bernoulli: means must lie in [0,1]");
    if (infinite) *infinite = false;
    if (mu0 == mu1) return 0.0;
    // Terms with mu0 in {0,1} vanish (0 log 0 = 0); a zero denominator with a
    // nonzero numerator makes the divergence infinite.
    double kl = 0;
    if (mu0 > 0) {
        if (mu1 == 0) {
            if (infinite) *infinite = true;
            return std::numeric_limits<double>::infinity();
        }
        kl += mu0 * std::log(mu0 / mu1);
    }
    if (mu0 < 1) {
        if (mu1 == 1) {
            if (infinite) *infinite = true;
            return std::numeric_limits<double>::infinity();
        }
        kl += (1 - mu0) * std::log((1 - mu0) / (1 - mu1));
    }
    return kl;
}

double max_kl(const DemandModel& m0, const DemandModel& m1,
              const std::vector<double>& price_grid) {
    double best = 0;
    for (double p : price_grid) {
        double mu0 = m0.mean_demand(p);
        double mu1 = m1.mean_demand(p);
        if (mu0 <= 0 || mu0 >= 1 || mu1 <= 0 || mu1 >= 1)
            throw std::invalid_argument("max_kl: grid point with boundary mean");
        best = std::max(best, kl_bernoulli(mu0, mu1));
    }
    return best;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

ScalingResult cm_rate_study(const std::vector<long>& n_grid, int replications,
                            uint64_t master_seed, double noise_sigma) {
    ScalingResult res;
    res.study = "cm_scaling";
    res.k = 0;
    std::vector<std::pair<double, double>> pts;
    for (size_t cell = 0; cell < n_grid.size(); ++cell) {
        BatchSpec spec;
        spec.policy = "cm";
        spec.model = make_linear(0.7);
        spec.noise = make_noise(NoiseKind::gaussian_clipped, noise_sigma);
        spec.n = n_grid[cell];
        spec.replications = replications;
        spec.master_seed = master_seed;
        spec.run_index = cell;
        spec.randomize_theta = true;
        BatchResult b = run_batch(spec);
        double logn = std::log(static_cast<double>(spec.n));
        res.cells.push_back(
            {spec.n, b.mean, b.stderr_mean, b.mean / (logn * logn)});
        pts.push_back({static_cast<double>(spec.n), b.mean});
    }
    res.fit = fit_scaling_exponent(pts, FitTransform::log_log_n);
    return res;
}

ScalingResult icm_rate_study(int k, int s, const std::vector<long>& n_grid,
                             int replications, uint64_t master_seed,
                             double noise_sigma) {
    if (k != 1 && k != 2)
        throw std::invalid_argument("icm_rate_study: k must be 1 or 2");
    ScalingResult res;
    res.study = "icm_scaling";
    res.k = k;
    Box box = standard_poly_box(k);
    std::vector<double> mid;
    for (const auto& iv : box) mid.push_back(0.5 * (iv.lo + iv.hi));
    DemandModel base = make_polynomial(mid, box);
    base.sensitivity_s = s;
    std::vector<std::pair<double, double>> pts;
    for (size_t cell = 0; cell < n_grid.size(); ++cell) {
        BatchSpec spec;
        spec.policy = "icm";
        spec.model = base;
        spec.noise = make_noise(NoiseKind::gaussian_clipped, noise_sigma);
        spec.n = n_grid[cell];
        spec.replications = replications;
        spec.master_seed = master_seed;
        spec.run_index = 100 + cell;
        spec.randomize_theta = true;
        BatchResult b = run_batch(spec);
        double ref = std::pow(static_cast<double>(spec.n),
                              static_cast<double>(k) / (k + 1));
        res.cells.push_back({spec.n, b.mean, b.stderr_mean, b.mean / ref});
        pts.push_back({static_cast<double>(spec.n), b.mean});
    }
    res.fit = fit_scaling_exponent(pts, FitTransform::log_n);
    return res;
}

SeparationReport separation_study(const std::vector<long>& n_grid,
                                  int replications, uint64_t master_seed,
                                  double noise_sigma) {
    SeparationReport rep;
    NoiseModel noise = make_noise(NoiseKind::gaussian_clipped, noise_sigma);
    std::vector<std::pair<double, double>> cm_pts, mle_pts;
    for (size_t cell = 0; cell < n_grid.size(); ++cell) {
        long n = n_grid[cell];
        SeparationRow row;
        row.n = n;
        double cm_sum = 0, cm_ss = 0, mle_sum = 0, mle_ss = 0;
        long mle_inc = 0;
        for (int r = 0; r < replications; ++r) {
            // Hard instances: nearly flat revenue near p = 1.
            RngStream draw(master_seed, 1000 + cell, static_cast<uint64_t>(r));
            double a = 0.5 + 0.05 * draw.uniform01();
            DemandModel model = make_linear(a);

            RngStream rng_cm(master_seed, 2000 + cell, static_cast<uint64_t>(r));
            auto cm = make_cm_policy(model, n, noise);
            double cr = simulate(*cm, model, noise, n, rng_cm).total_regret();
            cm_sum += cr;
            cm_ss += cr * cr;

            RngStream rng_mle(master_seed, 3000 + cell, static_cast<uint64_t>(r));
            auto mle = make_mle_greedy_policy(model);
            Trajectory tm = simulate(*mle, model, noise, n, rng_mle);
            double mr = tm.total_regret();
            mle_sum += mr;
            mle_ss += mr * mr;
            if (tm.meta.price_increase_count > 0) ++mle_inc;
        }
        double logn = std::log(static_cast<double>(n));
        auto finish = [&](double sum, double ss, double* mean, double* se) {
            *mean = sum / replications;
            double var = (ss - sum * sum / replications) /
                         std::max(1, replications - 1);
            *se = std::sqrt(std::max(0.0, var) / replications);
        };
        finish(cm_sum, cm_ss, &row.cm_mean, &row.cm_stderr);
        finish(mle_sum, mle_ss, &row.mle_mean, &row.mle_stderr);
        row.cm_ratio = row.cm_mean / (logn * logn);
        row.mle_ratio = row.mle_mean / logn;
        row.mle_increase_frac = static_cast<double>(mle_inc) / replications;
        rep.rows.push_back(row);
        cm_pts.push_back({static_cast<double>(n), row.cm_mean});
        mle_pts.push_back({static_cast<double>(n), row.mle_mean});
    }
    if (rep.rows.size() >= 4) {
        rep.cm_fit = fit_scaling_exponent(cm_pts, FitTransform::log_log_n);
        rep.mle_fit = fit_scaling_exponent(mle_pts, FitTransform::log_n);
    }
    return rep;
}

std::string format_scaling_report(const ScalingResult& r) {
    std::ostringstream os;
    os << "study\t" << r.study << "\nk\t" << r.k << "\n";
    os << "n\tmean_regret\tstderr\tratio\n";
    for (const auto& c : r.cells)
        os << c.n << "\t" << fmt(c.mean_regret) << "\t" << fmt(c.stderr_mean)
           << "\t" << fmt(c.ratio) << "\n";
    os << "fitted_exponent\t" << fmt(r.fit.slope) << "\nintercept\t"
       << fmt(r.fit.intercept) << "\nr_squared\t" << fmt(r.fit.r_squared)
       << "\n";
    return os.str();
}

std::string format_separation_report(const SeparationReport& r) {
    std::ostringstream os;
    os << "study\tseparation\n";
    os << "n\tcm_mean\tcm_stderr\tcm_ratio_log2n\tmle_mean\tmle_stderr\t"
          "mle_ratio_logn\tmle_increase_frac\n";
    for (const auto& row : r.rows)
        os << row.n << "\t" << fmt(row.cm_mean) << "\t" << fmt(row.cm_stderr)
           << "\t" << fmt(row.cm_ratio) << "\t" << fmt(row.mle_mean) << "\t"
           << fmt(row.mle_stderr) << "\t" << fmt(row.mle_ratio) << "\t"
           << fmt(row.mle_increase_frac) << "\n";
    os << "cm_loglog_slope\t" << fmt(r.cm_fit.slope) << "\n";
    os << "mle_log_slope\t" << fmt(r.mle_fit.slope) << "\n";
    return os.str();
}

}  // namespace mdp
