#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "fracbem/chebyshev.hpp"
#include "fracbem/geometry.hpp"

// Boundary-element operators for the fictitious-source formulation: the
// Laplace single/double layer matrices H and G on the boundary, the domain
// coupling matrices for multiquadric particular solutions, the
// Dirichlet-reduced interior evaluation maps, and the reduced fractional ODE
// system in the source strengths b(t).
namespace fracbem {

// Derivative selector for interior evaluation maps.
enum class Deriv { u = 0, x, y, xx, xy, yy };
inline constexpr std::array<Deriv, 6> kAllDerivs = {
    Deriv::u, Deriv::x, Deriv::y, Deriv::xx, Deriv::xy, Deriv::yy};

// Multiquadric source f(r) = sqrt(r^2 + c^2) and its particular solution
// uhat with laplacian(uhat) = f; returns uhat and its radial derivatives.
struct ParticularSolution {
    double u;     // uhat(r)
    double u_r;   // d uhat / dr
    double u_rr;  // d^2 uhat / dr^2
};
ParticularSolution multiquadric_particular(double r, double c);

// Smooth radial factors used for Cartesian derivatives of uhat:
// grad uhat = W(r) d, hessian uhat = W I + V d d^T with d the offset vector.
// Both limits at r = 0 are finite (W -> c/2, V -> 1/(4c)).
double multiquadric_w(double r2, double c);
double multiquadric_v(double r2, double c);

struct RbfSet {
    Eigen::MatrixX2d centers;
    double c = 1.0;  // shape parameter, length units
};

struct BoundaryOps {
    Eigen::MatrixXd H;  // N x N double-layer matrix, rows sum to zero
    Eigen::MatrixXd G;  // N x N single-layer matrix
};

// Collocation at boundary nodes; off-diagonal entries by Gauss-Legendre
// (8 points, escalated to 32 when the node lies within one element length),
// diagonal of G analytic for the straight element, diagonal of H by the
// row-sum identity H 1 = 0.
BoundaryOps assemble_boundary_ops(const BoundaryMesh& mesh);

struct DomainOps {
    // Row i, column j: boundary-node-i response of the particular solution
    // pair of source j (Green-identity line integral plus the 1/2 jump).
    Eigen::MatrixXd Abar;  // N x M
    // Interior evaluation matrices, indexed by Deriv.
    std::array<Eigen::MatrixXd, 6> Ahat;  // M x M
    std::array<Eigen::MatrixXd, 6> Hhat;  // M x N
    std::array<Eigen::MatrixXd, 6> Ghat;  // M x N
    // Count of interior points that sat within one element length of the
    // boundary (their quadrature was escalated to 32 points).
    int near_boundary_points = 0;
};

DomainOps assemble_domain_ops(const BoundaryMesh& mesh,
                              const InteriorNodes& interior,
                              const RbfSet& rbf);

// Dirichlet-reduced interior maps: with the boundary trace h prescribed and
// u_n eliminated through G u_n = H u - Abar b,
//   u_pq(interior) = Umap[pq] b + Cmap[pq] h.
struct ReducedMaps {
    std::array<Eigen::MatrixXd, 6> Umap;  // M x M
    std::array<Eigen::MatrixXd, 6> Cmap;  // M x N
    double g_condition = 0.0;             // estimate from the LU of G
};

ReducedMaps reduce_dirichlet(const BoundaryOps& bops, const DomainOps& dops);

// One instance of the governing equation
//   sum_j gamma_j(x) D^{alpha_j} u = A u_xx + 2B u_xy + C u_yy
//                                    + D u_x + E u_y + F u + g(x, t)
// with Dirichlet data h(x, t) and initial data d_i(x).
struct PdeCoefficients {
    struct FractionalTerm {
        double alpha;
        std::function<double(const Eigen::Vector2d&)> gamma;
    };
    std::vector<FractionalTerm> terms;  // highest order last
    using Field = std::function<double(const Eigen::Vector2d&)>;
    Field A, B, C, D, E, F;  // any may be null (treated as zero)
    std::function<double(const Eigen::Vector2d&, double)> g;  // may be null
    std::function<double(const Eigen::Vector2d&, double)> h;  // may be null (zero trace)
    std::vector<Field> initial;  // d_0 ... d_{m-1}
    int order_ceiling() const;   // m = ceil(max alpha)
};

// The reduced multi-term fractional ODE system
//   sum_j S_j D^{alpha_j} b(t) = Nmat b(t) + f(t),  b given by initial data,
// together with everything needed to reconstruct fields afterwards.
struct ReducedOdeSystem {
    std::vector<double> alphas;
    std::vector<Eigen::MatrixXd> S;  // M x M, one per fractional term
    Eigen::MatrixXd Nmat;            // M x M
    Eigen::MatrixXd f_coeffs;        // M x (K+1), Chebyshev coefficients of f
    std::vector<Eigen::VectorXd> b_init;  // m vectors of length M
    int m = 1;                            // ceil(max alpha)
    // Chebyshev coefficients of the boundary-trace contribution c_pq(t)
    // (M x (K+1); zero matrices when h == 0), and the interior maps.
    std::array<Eigen::MatrixXd, 6> c_coeffs;
    std::array<Eigen::MatrixXd, 6> Umap;
    double u00_condition = 0.0;
};

ReducedOdeSystem build_ode_system(const PdeCoefficients& pde,
                                  const ReducedMaps& maps,
                                  const BoundaryMesh& mesh,
                                  const InteriorNodes& interior,
                                  const ChebBasis& basis);

}  // namespace fracbem
