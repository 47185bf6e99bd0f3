#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "fracbem/chebyshev.hpp"
#include "fracbem/special.hpp"
#include "fracbem/tau.hpp"

using namespace fracbem;

namespace {

// Scalar (M = 1) system  sum_j s_j D^{alpha_j} b = n b + f(t).
ReducedOdeSystem scalar_system(const std::vector<double>& alphas, double nval,
                               const std::function<double(double)>& f,
                               const std::vector<double>& init,
                               const ChebBasis& basis) {
    ReducedOdeSystem sys;
    sys.alphas = alphas;
    for (size_t j = 0; j < alphas.size(); ++j)
        sys.S.push_back(Eigen::MatrixXd::Identity(1, 1));
    sys.Nmat = Eigen::MatrixXd::Constant(1, 1, nval);
    sys.f_coeffs = project(basis, f).transpose();
    for (double v : init)
        sys.b_init.push_back(Eigen::VectorXd::Constant(1, v));
    sys.m = static_cast<int>(init.size());
    for (auto& c : sys.c_coeffs) c = Eigen::MatrixXd::Zero(1, basis.K + 1);
    for (auto& u : sys.Umap) u = Eigen::MatrixXd::Zero(1, 1);
    sys.Umap[0] = Eigen::MatrixXd::Identity(1, 1);
    return sys;
}

}  // namespace

TEST_CASE("system dimensions and degree guard") {
    const ChebBasis basis{2, 1.0};
    const ReducedOdeSystem sys =
        scalar_system({1.0}, 0.0, [](double) { return 0.0; }, {0.0}, basis);
    const TauSystem ts = assemble_tau_system(sys, basis);
    CHECK(ts.A.rows() == 3);
    CHECK(ts.A.cols() == 3);
    CHECK(ts.rhs.size() == 3);

    const ChebBasis small{1, 1.0};
    const ReducedOdeSystem frac = scalar_system(
        {1.7}, 0.0, [](double) { return 0.0; }, {0.0, 0.0}, small);
    CHECK_THROWS_AS(assemble_tau_system(frac, small),
                    const std::invalid_argument&);
}

TEST_CASE("polynomial right-hand sides are reproduced exactly") {
    SUBCASE("b' = 3t^2 integrates to t^3") {
        const ChebBasis basis{6, 1.0};
        const ReducedOdeSystem sys = scalar_system(
            {1.0}, 0.0, [](double t) { return 3.0 * t * t; }, {0.0}, basis);
        const TauSolution sol = solve_tau(sys, basis);
        for (double t : {0.0, 0.25, 0.7, 1.0})
            CHECK(sol.eval_b(t)[0] == doctest::Approx(t * t * t).epsilon(1e-12));
    }
    SUBCASE("b'' = 2 with both initial rows") {
        const ChebBasis basis{5, 2.0};
        const ReducedOdeSystem sys = scalar_system(
            {2.0}, 0.0, [](double) { return 2.0; }, {0.0, 0.0}, basis);
        const TauSolution sol = solve_tau(sys, basis);
        for (double t : {0.0, 0.5, 1.3, 2.0})
            CHECK(sol.eval_b(t)[0] == doctest::Approx(t * t).epsilon(1e-12));
        CHECK(sol.eval_b_derivative(1, 2.0)[0] ==
              doctest::Approx(4.0).epsilon(1e-11));
    }
}

TEST_CASE("exponential decay at spectral accuracy") {
    const ChebBasis basis{12, 1.0};
    const ReducedOdeSystem sys = scalar_system(
        {1.0}, -1.0, [](double) { return 0.0; }, {1.0}, basis);
    const TauSolution sol = solve_tau(sys, basis);
    for (double t : {0.0, 0.3, 0.6, 1.0})
        CHECK(sol.eval_b(t)[0] == doctest::Approx(std::exp(-t)).epsilon(1e-9));
}

TEST_CASE("half-order equation with polynomial solution is exact") {
    // D^{1/2} b + b = f manufactured so that b = t^3: the operational matrix
    // rows are the basis projections of the fractional derivatives, so a
    // polynomial solution satisfies the projected equations identically.
    const ChebBasis basis{8, 1.0};
    auto f = [](double t) {
        return caputo_power(0.5, 3.0, t) + t * t * t;
    };
    const ReducedOdeSystem sys = scalar_system({0.5}, -1.0, f, {0.0}, basis);
    const TauSolution sol = solve_tau(sys, basis);
    for (double t : {0.1, 0.4, 0.75, 1.0})
        CHECK(sol.eval_b(t)[0] == doctest::Approx(t * t * t).epsilon(1e-10));
}

TEST_CASE("two-term fractional equation with polynomial solution") {
    // D^{1.7} b + D^{0.3} b + b = f, b = t^2 + t^3, zero initial state.
    // The forcing contains a t^0.3 term whose projection quadrature converges
    // only algebraically, so the recovered polynomial is accurate to the
    // forcing-projection error (~4e-7 in the coefficients), not to roundoff.
    const ChebBasis basis{10, 1.5};
    auto f = [](double t) {
        return caputo_power(1.7, 2.0, t) + caputo_power(1.7, 3.0, t) +
               caputo_power(0.3, 2.0, t) + caputo_power(0.3, 3.0, t) +
               (t * t + t * t * t);
    };
    ReducedOdeSystem sys = scalar_system({0.3, 1.7}, -1.0, f, {0.0, 0.0}, basis);
    const TauSolution sol = solve_tau(sys, basis);
    for (double t : {0.2, 0.8, 1.5})
        CHECK(sol.eval_b(t)[0] ==
              doctest::Approx(t * t + t * t * t).epsilon(1e-6));
}

TEST_CASE("coupled two-component system recovers sine and cosine") {
    // b' = [[0, 1], [-1, 0]] b, b(0) = (0, 1): b = (sin t, cos t). This
    // exercises the component/degree unknown ordering of the assembled system.
    const ChebBasis basis{14, 1.0};
    ReducedOdeSystem sys;
    sys.alphas = {1.0};
    sys.S.push_back(Eigen::MatrixXd::Identity(2, 2));
    sys.Nmat = Eigen::MatrixXd::Zero(2, 2);
    sys.Nmat(0, 1) = 1.0;
    sys.Nmat(1, 0) = -1.0;
    sys.f_coeffs = Eigen::MatrixXd::Zero(2, basis.K + 1);
    Eigen::VectorXd b0(2);
    b0 << 0.0, 1.0;
    sys.b_init.push_back(b0);
    sys.m = 1;
    for (auto& c : sys.c_coeffs) c = Eigen::MatrixXd::Zero(2, basis.K + 1);
    for (auto& u : sys.Umap) u = Eigen::MatrixXd::Zero(2, 2);
    sys.Umap[0] = Eigen::MatrixXd::Identity(2, 2);

    const TauSolution sol = solve_tau(sys, basis);
    for (double t : {0.0, 0.4, 0.9, 1.0}) {
        const Eigen::VectorXd b = sol.eval_b(t);
        CHECK(b[0] == doctest::Approx(std::sin(t)).epsilon(1e-9));
        CHECK(b[1] == doctest::Approx(std::cos(t)).epsilon(1e-9));
    }
    const Eigen::VectorXd db = sol.eval_b_derivative(1, 0.7);
    CHECK(db[0] == doctest::Approx(std::cos(0.7)).epsilon(1e-8));
    CHECK(db[1] == doctest::Approx(-std::sin(0.7)).epsilon(1e-8));
    // field reconstruction with identity value map and no boundary term
    const Eigen::VectorXd u = reconstruct_field(sys, sol, 0.4, Deriv::u);
    CHECK(u[0] == doctest::Approx(std::sin(0.4)).epsilon(1e-9));
}
