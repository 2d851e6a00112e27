#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mdp/linalg.hpp"

namespace {

// Independent oracle: Gauss-Jordan inverse with partial pivoting.
mdp::Matrix elimination_inverse(const mdp::Matrix& m) {
    int n = m.n;
    mdp::Matrix a = m;
    mdp::Matrix inv = mdp::Matrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a.at(r, col)) > std::abs(a.at(piv, col))) piv = r;
        REQUIRE(std::abs(a.at(piv, col)) > 0);
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        double d = a.at(col, col);
        for (int j = 0; j < n; ++j) {
            a.at(col, j) /= d;
            inv.at(col, j) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a.at(r, col);
            if (f == 0) continue;
            for (int j = 0; j < n; ++j) {
                a.at(r, j) -= f * a.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

double max_entry_diff(const mdp::Matrix& a, const mdp::Matrix& b) {
    double best = 0;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
            best = std::max(best, std::abs(a.at(i, j) - b.at(i, j)));
    return best;
}

}  // namespace

TEST_CASE("dispersion basics") {
    std::vector<double> p{0.1, 0.9, 0.4};
    CHECK(mdp::dispersion(p) == doctest::Approx(0.3).epsilon(1e-14));
    std::vector<double> dup{0.5, 0.5};
    CHECK(mdp::dispersion(dup) == 0.0);
    std::vector<double> one{0.5};
    CHECK_THROWS_AS(mdp::dispersion(one), std::invalid_argument);
}

TEST_CASE("vandermonde matrix layout") {
    std::vector<double> nodes{0.5, 2.0};
    auto sys = mdp::make_vandermonde(nodes);
    CHECK(sys.matrix.at(0, 0) == 1.0);
    CHECK(sys.matrix.at(0, 1) == 0.5);
    CHECK(sys.matrix.at(1, 0) == 1.0);
    CHECK(sys.matrix.at(1, 1) == 2.0);
}

TEST_CASE("lagrange inverse matches elimination oracle") {
    std::mt19937_64 gen(991);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 + static_cast<int>(gen() % 5);  // up to degree 6
        std::vector<double> nodes(static_cast<size_t>(n));
        do {
            for (double& x : nodes) x = u(gen);
        } while (mdp::dispersion(nodes) < 0.05);
        auto sys = mdp::make_vandermonde(nodes);
        auto inv = mdp::inverse_vandermonde(nodes);
        auto oracle = elimination_inverse(sys.matrix);
        // Entries of V^{-1} can be large at small dispersion; compare
        // relative to the largest entry.
        double scale = 1.0;
        for (double v : inv.a) scale = std::max(scale, std::abs(v));
        CHECK(max_entry_diff(inv, oracle) <= 1e-8 * scale);
        // And V * V^{-1} = I.
        auto prod = mdp::matmul(sys.matrix, inv);
        CHECK(max_entry_diff(prod, mdp::Matrix::identity(n)) <= 1e-8);
    }
}

TEST_CASE("solve_vandermonde recovers coefficients") {
    std::vector<double> nodes{0.2, 0.5, 0.9};
    std::vector<double> theta{1.5, -2.0, 0.75};
    std::vector<double> values(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
        values[i] = theta[0] + theta[1] * nodes[i] + theta[2] * nodes[i] * nodes[i];
    auto sol = mdp::solve_vandermonde(nodes, values);
    REQUIRE(sol.size() == 3);
    for (size_t i = 0; i < 3; ++i)
        CHECK(sol[i] == doctest::Approx(theta[i]).epsilon(1e-10));
}

TEST_CASE("vandermonde rejects degenerate nodes") {
    std::vector<double> dup{0.3, 0.3};
    CHECK_THROWS_AS(mdp::inverse_vandermonde(dup), std::invalid_argument);
    std::vector<double> one{0.3};
    CHECK_THROWS_AS(mdp::inverse_vandermonde(one), std::invalid_argument);
}

TEST_CASE("op_norm is the max absolute row sum") {
    mdp::Matrix m = mdp::Matrix::zero(2);
    m.at(0, 0) = 1;
    m.at(0, 1) = -3;
    m.at(1, 0) = 2;
    m.at(1, 1) = 1;
    CHECK(mdp::op_norm(m) == 4.0);
}

TEST_CASE("gautschi check on hand-worked node sets") {
    std::vector<double> n2{0.0, 1.0};
    auto c2 = mdp::check_gautschi_bound(n2);
    CHECK(c2.norm == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c2.gautschi == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c2.coarse == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c2.holds);

    std::vector<double> n3{0.0, 0.5, 1.0};
    auto c3 = mdp::check_gautschi_bound(n3);
    CHECK(c3.gautschi == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(c3.coarse == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(c3.norm <= c3.gautschi * (1 + 1e-12));
    CHECK(c3.holds);
}

TEST_CASE("gautschi bound holds on random node sets in [0,1]") {
    std::mt19937_64 gen(2718);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        int n = 2 + static_cast<int>(gen() % 5);
        std::vector<double> nodes(static_cast<size_t>(n));
        do {
            for (double& x : nodes) x = u(gen);
        } while (mdp::dispersion(nodes) < 0.02);
        auto c = mdp::check_gautschi_bound(nodes);
        CHECK(c.holds);
        CHECK(c.gautschi <= c.coarse * (1 + 1e-9));
    }
}
