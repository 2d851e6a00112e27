#include "mdp/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace mdp {

Matrix Matrix::zero(int n) {
    Matrix m;
    m.n = n;
    m.a.assign(static_cast<size_t>(n) * n, 0.0);
    return m;
}

Matrix Matrix::identity(int n) {
    Matrix m = zero(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix matmul(const Matrix& x, const Matrix& y) {
    if (x.n != y.n) throw std::invalid_argument("matmul: size mismatch");
    Matrix r = Matrix::zero(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            double v = x.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < x.n; ++j) r.at(i, j) += v * y.at(k, j);
        }
    return r;
}

double dispersion(std::span<const double> prices) {
    if (prices.size() < 2)
        throw std::invalid_argument("dispersion: need at least two prices");
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < prices.size(); ++i)
        for (size_t j = i + 1; j < prices.size(); ++j)
            best = std::min(best, std::abs(prices[i] - prices[j]));
    return best;
}

VandermondeSystem make_vandermonde(std::span<const double> nodes) {
    int n = static_cast<int>(nodes.size());
    VandermondeSystem sys;
    sys.nodes.assign(nodes.begin(), nodes.end());
    sys.matrix = Matrix::zero(n);
    for (int i = 0; i < n; ++i) {
        double pw = 1.0;
        for (int j = 0; j < n; ++j) {
            sys.matrix.at(i, j) = pw;
            pw *= nodes[i];
        }
    }
    return sys;
}

namespace {

void require_separated(std::span<const double> nodes) {
    if (nodes.size() < 2)
        throw std::invalid_argument("vandermonde: need at least two nodes");
    if (dispersion(nodes) < kSingularDispersion)
        throw std::invalid_argument("vandermonde: nodes too close (singular)");
}

}  // namespace

Matrix inverse_vandermonde(std::span<const double> nodes) {
    require_separated(nodes);
    int n = static_cast<int>(nodes.size());
    Matrix inv = Matrix::zero(n);
    // Column i of V^{-1} is the coefficient vector of the Lagrange basis
    // polynomial L_i, built by successive multiplication by (x - p_j)/(p_i - p_j).
    std::vector<double> coef(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        coef.assign(static_cast<size_t>(n), 0.0);
        coef[0] = 1.0;
        int deg = 0;
        double denom = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            denom *= nodes[i] - nodes[j];
            for (int d = deg; d >= 0; --d) {
                coef[static_cast<size_t>(d) + 1] += coef[d];
                coef[d] *= -nodes[j];
            }
            ++deg;
        }
        for (int r = 0; r < n; ++r) inv.at(r, i) = coef[r] / denom;
    }
    return inv;
}

std::vector<double> solve_vandermonde(std::span<const double> nodes,
                                      std::span<const double> values) {
    if (nodes.size() != values.size())
        throw std::invalid_argument("solve_vandermonde: size mismatch");
    Matrix inv = inverse_vandermonde(nodes);
    int n = inv.n;
    std::vector<double> theta(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) theta[i] += inv.at(i, j) * values[j];
    return theta;
}

double op_norm(const Matrix& m) {
    double best = 0;
    for (int i = 0; i < m.n; ++i) {
        double row = 0;
        for (int j = 0; j < m.n; ++j) row += std::abs(m.at(i, j));
        best = std::max(best, row);
    }
    return best;
}

GautschiCheck check_gautschi_bound(std::span<const double> nodes) {
    require_separated(nodes);
    GautschiCheck out;
    // The induced l1 norm (max absolute column sum): column i of V^{-1} holds
    // the coefficients of L_i, and the Gautschi product bounds exactly that
    // column's absolute sum. This is also the norm that propagates profile
    // error to parameter error in theta = V^{-1} y under l1.
    Matrix inv = inverse_vandermonde(nodes);
    int n = static_cast<int>(nodes.size());
    for (int j = 0; j < n; ++j) {
        double col = 0;
        for (int i = 0; i < n; ++i) col += std::abs(inv.at(i, j));
        out.norm = std::max(out.norm, col);
    }
    for (int i = 0; i < n; ++i) {
        double prod = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            prod *= (1.0 + std::abs(nodes[j])) / std::abs(nodes[j] - nodes[i]);
        }
        out.gautschi = std::max(out.gautschi, prod);
    }
    double h = dispersion(nodes);
    out.coarse = std::pow(2.0 / h, n - 1);
    // Float slack: the three quantities are computed by different routes.
    const double tol = 1e-9;
    out.holds = out.norm <= out.gautschi * (1 + tol);
    return out;
}

}  // namespace mdp
