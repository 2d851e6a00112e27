#pragma once

#include <vector>

// Closed-form solution of the phase-schedule LP for the ICM policy and the
// regret-exponent formula rho(m, s, k).

namespace mdp {

struct IcmTuning {
    int m = 0;                     // number of exploration phases
    double h = 0;                  // gap between neighboring exploration prices
    std::vector<long> n_schedule;  // n_1 < ... < n_m samples per price per phase
    double rho = 0;                // predicted regret exponent

    // Continuous LP solution before integer rounding.
    double x = 0, y = 0;
    std::vector<double> z;

    long exploration_rounds(int k) const;  // (k+1) * sum n_j
};

// rho(m,s,k) = [1 + (1 + s/2 + ... + (s/2)^{m-1}) k]
//            / [(s/2)^m + (1 + s/2 + ... + (s/2)^{m-1}) (k+1)].
// For s=2 this reduces to (mk+1)/(m(k+1)+1).
double rho(int m, int s, int k);

// Continuous solution of the equality system: x = rho(m,s,k), y = (1-x)/s,
// z_1 = x, z_{j+1} = (s/2) z_j + x - s k y. No horizon involved; h and the
// integer schedule are left empty.
IcmTuning continuous_lp_solution(int m, int s, int k);

// Scale the continuous solution to a horizon: h = n^{-y}, n_j = ceil(n^{z_j})
// with ties bumped to keep the schedule strictly increasing. If the schedule
// does not fit the horizon, m is reduced and the solve retried; throws if
// even m=1 overflows. requested_m is the m actually used (may be < input m).
IcmTuning solve_lp(long n, int k, int s, int m);

// Residuals of the m+2 defining equalities at the continuous solution.
std::vector<double> lp_equality_residuals(const IcmTuning& t, int s, int k);

}  // namespace mdp
