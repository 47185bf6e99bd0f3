#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracbem/bem.hpp"
#include "fracbem/geometry.hpp"
#include "fracbem/tau.hpp"

// Benchmark catalog: the five governing-equation instances with their
// domains, coefficient fields, data, and (where available) exact solutions,
// plus the end-to-end solve driver.
namespace fracbem {

struct ExampleProblem {
    std::string id;
    BoundaryCurve curve;
    PdeCoefficients pde;
    bool has_exact = false;
    // Exact value of the requested derivative of u at (point, t).
    std::function<double(const Eigen::Vector2d&, double, Deriv)> exact;
    double default_horizon = 1.0;
    // Human-readable notes on data choices that differ from the obvious
    // reading of the source problem (recorded in run metadata).
    std::vector<std::string> deviations;
};

// Catalog ids: ex1a (heat-like, (0,2pi)^2), ex1b (heat-like, unit square),
// ex2 (wave-like, variable coefficients), ex3 (convection-diffusion,
// manufactured), ex4 (convection-diffusion, manufactured), ex5 (multi-order
// anisotropic, star-shaped domain; alpha argument ignored).
ExampleProblem make_example(const std::string& id, double alpha);
std::vector<std::string> example_ids();

struct SolveConfig {
    int N = 40;               // boundary elements
    int M = 100;              // target interior nodes
    int K = 12;               // Chebyshev degree
    double L = 1.0;           // time horizon (basis interval)
    std::optional<double> rbf_c;  // shape parameter; default 4 diam / sqrt(M)
};

struct SolveResult {
    BoundaryMesh mesh;
    InteriorNodes interior;
    ReducedOdeSystem system;
    TauSolution solution;
    double rbf_c = 0.0;
    double g_condition = 0.0;  // condition estimate of the boundary system
    int near_boundary_points = 0;

    Eigen::VectorXd field(double t, Deriv pq) const;
};

// geometry -> boundary/domain operators -> reduced ODE -> Tau solve.
SolveResult solve_example(const ExampleProblem& problem,
                          const SolveConfig& config);

// Exact field at the interior nodes (problem.has_exact required).
Eigen::VectorXd exact_field(const ExampleProblem& problem,
                            const InteriorNodes& interior, double t,
                            Deriv pq);

}  // namespace fracbem
