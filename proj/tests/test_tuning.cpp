#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mdp/tuning.hpp"

TEST_CASE("rho closed-form values") {
    // s=2 reduces to (mk+1)/(m(k+1)+1).
    CHECK(mdp::rho(1, 2, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(mdp::rho(20, 2, 1) == doctest::Approx(21.0 / 41.0).epsilon(1e-15));
    CHECK(mdp::rho(3, 2, 2) == doctest::Approx(7.0 / 10.0).epsilon(1e-15));
    // s=4, m=1: (1 + k) / (2 + (k+1)).
    CHECK(mdp::rho(1, 4, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS(mdp::rho(0, 2, 1));
    CHECK_THROWS(mdp::rho(1, 1, 1));
    CHECK_THROWS(mdp::rho(1, 2, 0));
}

TEST_CASE("rho is decreasing in m and bounded below by its m->inf limit") {
    for (int s : {2, 3, 4})
        for (int k = 1; k <= 5; ++k) {
            double prev = 1.0;
            double limit = k / (k + s / 2.0);  // k/(k+1) when s = 2
            for (int m = 1; m <= 12; ++m) {
                double r = mdp::rho(m, s, k);
                CHECK(r < prev + 1e-15);
                CHECK(r >= limit - 1e-12);
                prev = r;
            }
        }
}

TEST_CASE("continuous solution satisfies the equality system exactly") {
    for (int s : {2, 3, 4})
        for (int k = 1; k <= 5; ++k)
            for (int m = 1; m <= 10; ++m) {
                auto t = mdp::continuous_lp_solution(m, s, k);
                CHECK(t.x == doctest::Approx(mdp::rho(m, s, k)).epsilon(1e-15));
                CHECK(t.y == doctest::Approx((1 - t.x) / s).epsilon(1e-15));
                for (double r : mdp::lp_equality_residuals(t, s, k))
                    CHECK(std::abs(r) <= 1e-12);
                // Exponent schedule is increasing and ends below 1.
                for (size_t j = 0; j + 1 < t.z.size(); ++j)
                    CHECK(t.z[j] < t.z[j + 1]);
                CHECK(t.z.back() < 1.0);
                CHECK(t.z.front() == doctest::Approx(t.x).epsilon(1e-15));
            }
}

TEST_CASE("worked schedule at n = 10^6, k = 1, s = 2, m = 1") {
    auto t = mdp::solve_lp(1000000, 1, 2, 1);
    CHECK(t.m == 1);
    CHECK(t.rho == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(t.y == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(t.h == doctest::Approx(0.1).epsilon(1e-12));
    REQUIRE(t.n_schedule.size() == 1);
    CHECK(t.n_schedule[0] == 10000);
    CHECK(t.exploration_rounds(1) == 20000);
}

TEST_CASE("integer schedule is strictly increasing and fits the horizon") {
    for (long n : {10000L, 100000L, 1000000L})
        for (int k = 1; k <= 2; ++k)
            for (int m = 1; m <= 4; ++m) {
                auto t = mdp::solve_lp(n, k, 2, m);
                CHECK(t.m <= m);
                CHECK(t.exploration_rounds(k) <= n);
                long prev = 0;
                for (long nj : t.n_schedule) {
                    CHECK(nj > prev);
                    prev = nj;
                }
                CHECK(t.h > 0);
                CHECK(t.h < 1);
            }
}

TEST_CASE("solve_lp reduces m when the requested schedule overflows") {
    auto t = mdp::solve_lp(2000, 1, 2, 6);
    CHECK(t.m < 6);
    CHECK(t.exploration_rounds(1) <= 2000);
}

TEST_CASE("solve_lp throws when even m = 1 overflows") {
    CHECK_THROWS_AS(mdp::solve_lp(20, 5, 2, 1), std::invalid_argument);
}
