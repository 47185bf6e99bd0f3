#pragma once

#include <Eigen/Dense>
#include <functional>

// Special functions and quadrature rules: Gauss-Legendre nodes, closed-form
// and numerical Caputo derivatives, and the one-parameter Mittag-Leffler
// function.
namespace fracbem {

// Nodes and weights on [-1, 1].
struct GaussRule {
    Eigen::VectorXd x;
    Eigen::VectorXd w;
};

// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on Legendre
// polynomials; nodes symmetric, weights positive).
GaussRule gauss_legendre(int n);

// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const GaussRule& rule);

// Caputo derivative of t^k (integer k >= 0) of order alpha > 0 at time t:
// zero when k < ceil(alpha) acting on the polynomial part below the
// derivative order, Gamma(k+1)/Gamma(k+1-alpha) t^{k-alpha} otherwise.
double caputo_monomial(double alpha, int k, double t);

// Caputo derivative of t^p for real p >= ceil(alpha) (fractional exponents
// admitted as long as the integral converges).
double caputo_power(double alpha, double p, double t);

// Numerical Caputo derivative of a smooth function at time t > 0.
//
// The defining integral (1/Gamma(m-a)) int_0^t u^(m)(tau) (t-tau)^{m-a-1} dtau
// is computed after the substitution sigma = (t - tau)^{m-a}, which removes
// the endpoint singularity exactly; u^(m) is evaluated with 5-point
// finite-difference stencils (one-sided near tau = 0 so u is never sampled at
// negative arguments). Integer alpha returns the plain m-th derivative.
// Accuracy ~1e-8 relative for smooth u; intended as a test oracle.
double caputo_quadrature(const std::function<double(double)>& u, double alpha,
                         double t);

struct MittagLefflerResult {
    double value = 0.0;
    // Set when the largest partial term exceeded 1e14 |result|: the
    // alternating series lost most significant digits in double precision
    // (happens for large |z| with small alpha).
    bool accuracy_loss = false;
};

// One-parameter Mittag-Leffler function E_alpha(z) = sum z^k / Gamma(ak+1),
// Kahan-compensated summation; E_1 uses exp directly.
MittagLefflerResult mittag_leffler(double alpha, double z);

// Finite-difference derivative weights (Fornberg): weights w such that
// f^(m)(x0) ~= sum_i w_i f(grid_i). Exact for polynomials up to degree
// grid.size()-1.
Eigen::VectorXd fd_weights(double x0, const Eigen::VectorXd& grid, int m);

}  // namespace fracbem
