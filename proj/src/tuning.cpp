#include "mdp/tuning.hpp"

#include <cmath>
#include <stdexcept>

namespace mdp {

long IcmTuning::exploration_rounds(int k) const {
    long total = 0;
    for (long nj : n_schedule) total += (k + 1) * nj;
    return total;
}

namespace {

double geo_sum(double q, int m) {  // 1 + q + ... + q^{m-1}
    double s = 0, pw = 1;
    for (int i = 0; i < m; ++i) {
        s += pw;
        pw *= q;
    }
    return s;
}

void check_ranges(int m, int s, int k) {
    if (m < 1 || s < 2 || k < 1)
        throw std::invalid_argument("tuning: need m >= 1, s >= 2, k >= 1");
}

}  // namespace

double rho(int m, int s, int k) {
    check_ranges(m, s, k);
    double g = geo_sum(s / 2.0, m);
    return (1.0 + g * k) / (std::pow(s / 2.0, m) + g * (k + 1));
}

IcmTuning continuous_lp_solution(int m, int s, int k) {
    check_ranges(m, s, k);
    IcmTuning t;
    t.m = m;
    t.x = rho(m, s, k);
    t.y = (1.0 - t.x) / s;
    t.rho = t.x;
    t.z.resize(static_cast<size_t>(m));
    t.z[0] = t.x;
    for (int j = 1; j < m; ++j)
        t.z[static_cast<size_t>(j)] =
            (s / 2.0) * t.z[static_cast<size_t>(j - 1)] + t.x - s * k * t.y;
    return t;
}

IcmTuning solve_lp(long n, int k, int s, int m) {
    check_ranges(m, s, k);
    if (n < 2) throw std::invalid_argument("tuning: horizon too small");
    for (int mm = m; mm >= 1; --mm) {
        IcmTuning t = continuous_lp_solution(mm, s, k);
        double nd = static_cast<double>(n);
        t.h = std::pow(nd, -t.y);
        t.n_schedule.resize(static_cast<size_t>(mm));
        long prev = 0;
        for (int j = 0; j < mm; ++j) {
            long nj = static_cast<long>(std::ceil(std::pow(nd, t.z[static_cast<size_t>(j)])));
            if (nj <= prev) nj = prev + 1;  // keep the schedule strictly increasing
            t.n_schedule[static_cast<size_t>(j)] = nj;
            prev = nj;
        }
        if (t.exploration_rounds(k) <= n) return t;
        if (mm == 1)
            throw std::invalid_argument(
                "tuning: schedule exceeds horizon even with m=1");
    }
    throw std::invalid_argument("tuning: unreachable");
}

std::vector<double> lp_equality_residuals(const IcmTuning& t, int s, int k) {
    std::vector<double> res;
    res.push_back(t.z[0] - t.x);
    double rhs = t.x - s * k * t.y;
    for (size_t j = 0; j + 1 < t.z.size(); ++j)
        res.push_back(t.z[j + 1] - (s / 2.0) * t.z[j] - rhs);
    res.push_back(1.0 - (s / 2.0) * t.z.back() - rhs);
    res.push_back(1.0 - s * t.y - t.x);
    return res;
}

}  // namespace mdp
