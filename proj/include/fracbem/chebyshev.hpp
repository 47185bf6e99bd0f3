#pragma once

#include <Eigen/Dense>
#include <functional>

// Shifted Chebyshev basis on (0, L): evaluation, weighted projection, Gram
// matrix of the unweighted inner product, and operational matrices that map
// basis coefficients to the coefficients of a Caputo derivative.
namespace fracbem {

struct ChebBasis {
    int K;     // highest degree; basis size K+1
    double L;  // interval (0, L)
};

// T_{L,i}(t), the degree-i shifted Chebyshev polynomial on (0, L).
double cheb_eval(const ChebBasis& basis, int i, double t);

// Column vector [T_{L,0}(t), ..., T_{L,K}(t)] by three-term recurrence.
Eigen::VectorXd cheb_phi(const ChebBasis& basis, double t);

// Evaluate a coefficient vector against the basis at time t.
double cheb_series(const ChebBasis& basis, const Eigen::VectorXd& coef,
                   double t);

// Coefficients of f in the weighted (Chebyshev-Gauss) inner product.
// Starts from 2K+2 quadrature nodes (exact for polynomial f of degree <= K)
// and doubles the node count until the coefficients stabilize to 1e-13, so
// non-polynomial f is resolved to full double precision too.
Eigen::VectorXd project(const ChebBasis& basis,
                        const std::function<double(double)>& f);

// Gram matrix of the plain L2 inner product, W(i,j) = int_0^L T_i T_j dt,
// by Gauss-Legendre quadrature exact at the polynomial degree 2K.
Eigen::MatrixXd gram_matrix(const ChebBasis& basis);

// First-derivative operational matrix in closed form:
// row i, column j holds 4i/(rho_j L) for j < i with i-j odd, else zero
// (rho_0 = 2, rho_j = 1 otherwise). Exact in double.
Eigen::MatrixXd com_first(const ChebBasis& basis);

// Integer-order operational matrix as the n-th matrix power of com_first.
Eigen::MatrixXd com_integer(const ChebBasis& basis, int n);

// Caputo operational matrix of arbitrary order nu > 0. Integer nu dispatches
// to com_integer. Fractional nu evaluates the alternating Gamma-ratio sums in
// 150-digit floating point internally (the sum cancels ~0.61 i digits at row
// i, far beyond double for K > 20) and rounds the entries to double.
// Row i, column j: coefficient of T_j in the projection of D^nu T_i.
Eigen::MatrixXd com_fractional(const ChebBasis& basis, double nu);

}  // namespace fracbem
