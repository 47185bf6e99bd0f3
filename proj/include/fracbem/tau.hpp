#pragma once

#include <Eigen/Dense>

#include "fracbem/bem.hpp"
#include "fracbem/chebyshev.hpp"

// Spectral solve of the reduced multi-term fractional ODE system: the
// residual's leading Galerkin projections are set to zero and the initial
// rows pin the Chebyshev coefficient matrix Psi of b(t).
namespace fracbem {

struct TauSolution {
    ChebBasis basis{0, 1.0};
    Eigen::MatrixXd Psi;  // M x (K+1)

    Eigen::VectorXd eval_b(double t) const;
    // Time-derivative of order i (integer) of b at t, via the operational
    // matrix; used for checking the initial rows.
    Eigen::VectorXd eval_b_derivative(int i, double t) const;
};

struct TauSystem {
    Eigen::MatrixXd A;    // M(K+1) square
    Eigen::VectorXd rhs;  // M(K+1)
};

// Rows: for each of the M components, the inner products of the residual
// against T_0 ... T_{K-m} (through the Gram matrix of the plain L2 product),
// then the M*m initial-condition rows Psi D^(i) Phi(0) = b_init[i].
// Unknown ordering: vec(Psi) grouped by component, degree fastest.
TauSystem assemble_tau_system(const ReducedOdeSystem& sys,
                              const ChebBasis& basis);

// Dense LU solve of the assembled system.
TauSolution solve_tau(const ReducedOdeSystem& sys, const ChebBasis& basis);

// Interior field values at time t: Umap[pq] b(t) plus the boundary-trace
// contribution c_pq(t).
Eigen::VectorXd reconstruct_field(const ReducedOdeSystem& sys,
                                  const TauSolution& sol, double t,
                                  Deriv pq);

}  // namespace fracbem
