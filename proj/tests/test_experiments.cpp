#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "mdp/experiments.hpp"

TEST_CASE("scaling fit recovers synthetic exponents") {
    std::vector<std::pair<double, double>> power, poly_log, flat;
    for (double n : {1000.0, 10000.0, 100000.0, 1000000.0, 10000000.0}) {
        power.push_back({n, 7.0 * std::sqrt(n)});
        poly_log.push_back({n, 3.0 * std::pow(std::log(n), 2.0)});
        flat.push_back({n, 42.0});
    }
    auto f1 = mdp::fit_scaling_exponent(power, mdp::FitTransform::log_n);
    CHECK(f1.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f1.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-10));
    CHECK(f1.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    auto f2 = mdp::fit_scaling_exponent(poly_log, mdp::FitTransform::log_log_n);
    CHECK(f2.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f2.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    auto f3 = mdp::fit_scaling_exponent(flat, mdp::FitTransform::log_n);
    CHECK(f3.slope == doctest::Approx(0.0).epsilon(1e-12));

    std::vector<std::pair<double, double>> few{{10, 1}, {100, 2}, {1000, 3}};
    CHECK_THROWS_AS(mdp::fit_scaling_exponent(few, mdp::FitTransform::log_n),
                    std::invalid_argument);
    std::vector<std::pair<double, double>> neg{
        {10, 1}, {100, -2}, {1000, 3}, {10000, 4}};
    CHECK_THROWS_AS(mdp::fit_scaling_exponent(neg, mdp::FitTransform::log_n),
                    std::invalid_argument);
}

TEST_CASE("bernoulli KL closed form") {
    CHECK(mdp::kl_bernoulli(0.5, 0.5) == 0.0);
    // 0.5 log(0.5/0.6) + 0.5 log(0.5/0.4)
    CHECK(mdp::kl_bernoulli(0.5, 0.6) ==
          doctest::Approx(0.0204109972601276).epsilon(1e-6));
    bool inf = false;
    double v = mdp::kl_bernoulli(0.5, 1.0, &inf);
    CHECK(inf);
    CHECK(std::isinf(v));
    CHECK(mdp::kl_bernoulli(0.0, 0.5) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("lower-bound instances are statistically close to the baseline") {
    mdp::DemandModel d0;
    d0.family = mdp::Family::linear;
    d0.theta = {1.0};
    d0.param_box = {{1e-6, 1.0}};
    d0.price_domain = {0.0, 1.0};
    d0.finalize();

    std::vector<double> grid;
    for (int i = 1; i <= 1000; ++i) grid.push_back(0.5 * i / 1000);

    long n = 10000;
    for (long t : {160L, 400L, 900L, 2000L}) {
        auto dt = mdp::make_lower_bound_family_k0(t, n);
        double delta = mdp::lower_bound_delta(t, n);
        double kl = mdp::max_kl(d0, dt, grid);
        CHECK(kl <= 16.0 * delta * delta);
        // t observations cannot reliably distinguish the pair:
        // t * KL stays bounded by 16 log n.
        CHECK(static_cast<double>(t) * kl <=
              16.0 * std::log(static_cast<double>(n)) + 1e-9);
    }
}

TEST_CASE("max_kl rejects grids that reach a degenerate mean") {
    mdp::DemandModel d0;
    d0.family = mdp::Family::linear;
    d0.theta = {1.0};
    d0.param_box = {{1e-6, 1.0}};
    d0.price_domain = {0.0, 1.0};
    d0.finalize();
    auto dt = mdp::make_lower_bound_family_k0(400, 10000);
    std::vector<double> bad{0.5, 1.0};  // d0(1) = 0 is a boundary mean
    CHECK_THROWS_AS(mdp::max_kl(d0, dt, bad), std::invalid_argument);
}

TEST_CASE("small separation study runs and separates the policies") {
    auto rep = mdp::separation_study({1000, 2000}, 5, 2024, 0.02);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
        CHECK(row.cm_mean > 0);
        CHECK(row.mle_mean > 0);
        // The greedy baseline raises prices; CM never does.
        CHECK(row.mle_increase_frac > 0);
    }
}

TEST_CASE("scaling studies produce positive cells and a fit") {
    auto cm = mdp::cm_rate_study({1000, 3000, 10000, 30000}, 3, 7, 0.02);
    REQUIRE(cm.cells.size() == 4);
    for (const auto& c : cm.cells) CHECK(c.mean_regret > 0);
    CHECK(cm.fit.r_squared >= 0.0);

    auto icm = mdp::icm_rate_study(1, 2, {1000, 3000, 10000, 30000}, 3, 7, 0.002);
    CHECK(icm.k == 1);
    REQUIRE(icm.cells.size() == 4);
    for (const auto& c : icm.cells) CHECK(c.mean_regret > 0);
    CHECK_THROWS(mdp::icm_rate_study(3, 2, {1000, 3000, 10000, 30000}, 3, 7, 0.002));

    CHECK(!mdp::format_scaling_report(icm).empty());
}
