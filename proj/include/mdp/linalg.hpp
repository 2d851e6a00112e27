#pragma once

#include <span>
#include <vector>

// Vandermonde systems, dispersion and operator norms. These back the
// profile-inversion step of parameter estimation: solving V_p theta = y
// where V_p has rows (1, p_i, p_i^2, ..., p_i^{m-1}).

namespace mdp {

// Square matrix in row-major order.
struct Matrix {
    int n = 0;
    std::vector<double> a;  // n*n entries

    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static Matrix zero(int n);
    static Matrix identity(int n);
};

Matrix matmul(const Matrix& x, const Matrix& y);

// Minimum pairwise distance among the nodes. Throws std::invalid_argument
// if fewer than two nodes are given. A zero return means duplicate nodes.
double dispersion(std::span<const double> prices);

// Nodes with dispersion below this are treated as singular.
inline constexpr double kSingularDispersion = 1e-12;

struct VandermondeSystem {
    std::vector<double> nodes;
    Matrix matrix;  // rows (1, p_i, ..., p_i^{m-1})
};

VandermondeSystem make_vandermonde(std::span<const double> nodes);

// Inverse of the Vandermonde matrix via the coefficients of the Lagrange
// basis polynomials (column i holds the coefficients of L_i). Exact in
// exact arithmetic, considerably more stable than elimination at small
// dispersion. Throws on (near-)duplicate nodes.
Matrix inverse_vandermonde(std::span<const double> nodes);

// Solve V_p theta = y without forming the full inverse.
std::vector<double> solve_vandermonde(std::span<const double> nodes,
                                      std::span<const double> values);

// Max absolute row sum (the L1 operator norm).
double op_norm(const Matrix& m);

struct GautschiCheck {
    double norm = 0;          // ||V^{-1}||_op
    double gautschi = 0;      // max_i prod_{j != i} (1+|p_j|)/|p_j - p_i|
    double coarse = 0;        // 2^k / h^k with k = m-1, h = dispersion
    bool holds = false;       // norm <= gautschi && gautschi <= coarse
};

GautschiCheck check_gautschi_bound(std::span<const double> nodes);

}  // namespace mdp
