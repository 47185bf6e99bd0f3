#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fracbem/bem.hpp"
#include "fracbem/geometry.hpp"
#include "fracbem/metrics.hpp"
#include "fracbem/problems.hpp"

using namespace fracbem;

namespace {

// Interior nodes placed by hand (margin respected by the caller).
InteriorNodes manual_interior(const std::vector<Eigen::Vector2d>& pts) {
    InteriorNodes nodes;
    nodes.points.resize(static_cast<int>(pts.size()), 2);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        nodes.points.row(i) = pts[i];
    if (pts.size() >= 3) nodes.triangles = delaunay(nodes.points);
    return nodes;
}

}  // namespace

TEST_CASE("multiquadric particular solution identities") {
    for (double c : {0.5, 2.0}) {
        // values at r = 0
        const ParticularSolution p0 = multiquadric_particular(0.0, c);
        CHECK(p0.u == doctest::Approx(4.0 * c * c * c / 9.0 -
                                      c * c * c / 3.0 * std::log(2.0 * c))
                          .epsilon(1e-14));
        CHECK(multiquadric_w(0.0, c) == doctest::Approx(0.5 * c).epsilon(1e-12));
        CHECK(multiquadric_v(0.0, c) ==
              doctest::Approx(0.25 / c).epsilon(1e-12));
        for (double ratio : {0.05, 0.3, 1.0, 5.0, 20.0}) {
            const double r = ratio * c;
            const double r2 = r * r;
            // laplacian identity: u_rr + u_r / r = sqrt(r^2 + c^2)
            const ParticularSolution p = multiquadric_particular(r, c);
            const double lap = p.u_rr + p.u_r / r;
            CHECK(lap ==
                  doctest::Approx(std::sqrt(r2 + c * c)).epsilon(1e-6));
            // radial derivatives against central differences of u
            const double h = 1e-5 * c;
            const ParticularSolution pp = multiquadric_particular(r + h, c);
            const ParticularSolution pm = multiquadric_particular(r - h, c);
            CHECK(p.u_r ==
                  doctest::Approx((pp.u - pm.u) / (2.0 * h)).epsilon(1e-6));
            CHECK(p.u_rr ==
                  doctest::Approx((pp.u - 2.0 * p.u + pm.u) / (h * h))
                      .epsilon(1e-4));
        }
    }
}

TEST_CASE("boundary operators: diagonal closed form and row sums") {
    const BoundaryCurve sq = make_rectangle({0.0, 0.0}, {1.0, 1.0});
    const BoundaryMesh mesh = discretize_boundary(sq, 24);
    const BoundaryOps ops = assemble_boundary_ops(mesh);
    // analytic single-layer self term
    const double len = mesh.length[0];
    CHECK(ops.G(0, 0) ==
          doctest::Approx(-len / (2.0 * M_PI) * (std::log(0.5 * len) - 1.0))
              .epsilon(1e-14));
    // H annihilates constants by construction of its diagonal
    for (int i = 0; i < mesh.size(); ++i)
        CHECK(std::abs(ops.H.row(i).sum()) < 1e-14);
}

TEST_CASE("interior identity reproduces constants on several geometries") {
    const std::vector<BoundaryCurve> curves = {
        make_rectangle({0.0, 0.0}, {1.0, 1.0}),
        make_rectangle({-1.0, 0.0}, {3.0, 1.5}),
        make_disk(1.0),
        make_disk(2.5, {0.7, -0.3}),
        make_polar_curve([](double th) { return 1.5 + 0.3 * std::cos(3 * th); })};
    for (const auto& curve : curves) {
        const BoundaryMesh mesh = discretize_boundary(curve, 80);
        const InteriorNodes interior = generate_interior_nodes(curve, 20);
        const RbfSet rbf{interior.points,
                         4.0 * curve.diameter() / std::sqrt(20.0)};
        const DomainOps dops = assemble_domain_ops(mesh, interior, rbf);
        // u = 1, q = 0: each interior row of the double-layer map sums to 1
        const int d0 = static_cast<int>(Deriv::u);
        for (int p = 0; p < interior.size(); ++p)
            CHECK(dops.Hhat[d0].row(p).sum() ==
                  doctest::Approx(1.0).epsilon(1e-6));
        // all derivative rows annihilate constants
        for (Deriv d : {Deriv::x, Deriv::y, Deriv::xx, Deriv::xy, Deriv::yy}) {
            const int di = static_cast<int>(d);
            for (int p = 0; p < interior.size(); ++p)
                CHECK(std::abs(dops.Hhat[di].row(p).sum()) < 1e-6);
        }
    }
}

namespace {

struct HarmonicPatchError {
    double u = 0.0, ux = 0.0, uxx = 0.0;
};

// Dirichlet solve for a harmonic field: flux from the boundary system, then
// interior evaluation; returns RMS errors of u, u_x, u_xx.
HarmonicPatchError harmonic_patch(int n) {
    const BoundaryCurve sq = make_rectangle({0.0, 0.0}, {1.0, 1.0});
    const BoundaryMesh mesh = discretize_boundary(sq, n);
    const InteriorNodes interior = generate_interior_nodes(sq, 16);
    const RbfSet rbf{interior.points, 1.0};
    const DomainOps dops = assemble_domain_ops(mesh, interior, rbf);
    const BoundaryOps bops = assemble_boundary_ops(mesh);

    auto u_ex = [](const Eigen::Vector2d& p) {
        return p.x() * p.x() - p.y() * p.y() + 0.5 * p.x() * p.y();
    };
    Eigen::VectorXd ub(mesh.size());
    for (int j = 0; j < mesh.size(); ++j) ub[j] = u_ex(mesh.node.row(j));
    const Eigen::VectorXd q =
        Eigen::PartialPivLU<Eigen::MatrixXd>(bops.G).solve(bops.H * ub);

    HarmonicPatchError err;
    auto rms = [&](Deriv d, auto exact_fn) {
        const int di = static_cast<int>(d);
        const Eigen::VectorXd rec =
            dops.Hhat[di] * ub + dops.Ghat[di] * q;
        Eigen::VectorXd exv(interior.size());
        for (int p = 0; p < interior.size(); ++p)
            exv[p] = exact_fn(Eigen::Vector2d(interior.points.row(p)));
        return error_norms(exv, rec).rms;
    };
    err.u = rms(Deriv::u, u_ex);
    err.ux = rms(Deriv::x, [](const Eigen::Vector2d& p) {
        return 2.0 * p.x() + 0.5 * p.y();
    });
    err.uxx = rms(Deriv::xx, [](const Eigen::Vector2d&) { return 2.0; });
    return err;
}

}  // namespace

TEST_CASE("harmonic Dirichlet patch converges at order >= 1.5") {
    const HarmonicPatchError coarse = harmonic_patch(50);
    const HarmonicPatchError fine = harmonic_patch(200);
    CHECK(fine.u < coarse.u);
    const double order_u = std::log(coarse.u / fine.u) / std::log(4.0);
    const double order_ux = std::log(coarse.ux / fine.ux) / std::log(4.0);
    const double order_uxx = std::log(coarse.uxx / fine.uxx) / std::log(4.0);
    CHECK(order_u >= 1.5);
    CHECK(order_ux >= 1.5);
    CHECK(order_uxx >= 1.5);
    CHECK(fine.u < 1e-5);
}

TEST_CASE("fictitious-source Poisson patch") {
    // u = x^2 + y^2 has a constant source; the multiquadric interpolant of a
    // constant is accurate, so the reduced maps must reproduce u and its
    // second derivatives to patch-test accuracy: N = 100, M = 25.
    const BoundaryCurve sq = make_rectangle({0.0, 0.0}, {1.0, 1.0});
    const BoundaryMesh mesh = discretize_boundary(sq, 100);
    const InteriorNodes interior = generate_interior_nodes(sq, 25);
    const int m = interior.size();
    REQUIRE(m == 25);
    const RbfSet rbf{interior.points, 4.0 * sq.diameter() / std::sqrt(25.0)};
    const BoundaryOps bops = assemble_boundary_ops(mesh);
    const DomainOps dops = assemble_domain_ops(mesh, interior, rbf);
    const ReducedMaps maps = reduce_dirichlet(bops, dops);
    CHECK(maps.g_condition > 0.0);

    // interpolate the source f = 4 at the centers
    Eigen::MatrixXd phi(m, m);
    for (int p = 0; p < m; ++p)
        for (int k = 0; k < m; ++k) {
            const double r2 = (interior.points.row(p) - interior.points.row(k))
                                  .squaredNorm();
            phi(p, k) = std::sqrt(r2 + rbf.c * rbf.c);
        }
    const Eigen::VectorXd b = Eigen::PartialPivLU<Eigen::MatrixXd>(phi).solve(
        Eigen::VectorXd::Constant(m, 4.0));

    Eigen::VectorXd hb(mesh.size());
    for (int j = 0; j < mesh.size(); ++j)
        hb[j] = mesh.node.row(j).squaredNorm();

    auto check_map = [&](Deriv d, auto exact_fn, double tol) {
        const int di = static_cast<int>(d);
        const Eigen::VectorXd rec = maps.Umap[di] * b + maps.Cmap[di] * hb;
        Eigen::VectorXd exv(m);
        for (int p = 0; p < m; ++p)
            exv[p] = exact_fn(Eigen::Vector2d(interior.points.row(p)));
        CHECK(error_norms(exv, rec).rms < tol);
    };
    check_map(Deriv::u,
              [](const Eigen::Vector2d& p) { return p.squaredNorm(); }, 5e-3);
    check_map(Deriv::x, [](const Eigen::Vector2d& p) { return 2.0 * p.x(); },
              5e-3);
    check_map(Deriv::xx, [](const Eigen::Vector2d&) { return 2.0; }, 5e-3);
    check_map(Deriv::yy, [](const Eigen::Vector2d&) { return 2.0; }, 5e-3);
    check_map(Deriv::xy, [](const Eigen::Vector2d&) { return 0.0; }, 5e-3);
}

TEST_CASE("near-boundary interior points escalate quadrature and are counted") {
    const BoundaryCurve sq = make_rectangle({0.0, 0.0}, {1.0, 1.0});
    const BoundaryMesh mesh = discretize_boundary(sq, 40);  // length 0.1
    const InteriorNodes interior = manual_interior(
        {{0.5, 0.05}, {0.5, 0.5}, {0.3, 0.6}});
    const RbfSet rbf{interior.points, 0.8};
    const DomainOps dops = assemble_domain_ops(mesh, interior, rbf);
    CHECK(dops.near_boundary_points == 1);
    // the near point still satisfies the constant identity
    CHECK(dops.Hhat[0].row(0).sum() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("initial source strengths solve the value-map system") {
    const ExampleProblem prob = make_example("ex1a", 0.5);
    const BoundaryMesh mesh = discretize_boundary(prob.curve, 32);
    const InteriorNodes interior = generate_interior_nodes(prob.curve, 25);
    const RbfSet rbf{interior.points,
                     prob.curve.diameter() / std::sqrt(25.0)};
    const BoundaryOps bops = assemble_boundary_ops(mesh);
    const DomainOps dops = assemble_domain_ops(mesh, interior, rbf);
    const ReducedMaps maps = reduce_dirichlet(bops, dops);
    const ChebBasis basis{6, 1.5};
    const ReducedOdeSystem sys =
        build_ode_system(prob.pde, maps, mesh, interior, basis);
    REQUIRE(sys.m == 1);
    REQUIRE(sys.b_init.size() == 1);
    Eigen::VectorXd d0(interior.size());
    for (int p = 0; p < interior.size(); ++p)
        d0[p] = std::sin(interior.points(p, 0)) *
                std::sin(interior.points(p, 1));
    const Eigen::VectorXd residual =
        sys.Umap[static_cast<int>(Deriv::u)] * sys.b_init[0] - d0;
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-8);
    CHECK(sys.u00_condition > 1.0);
}

TEST_CASE("initial reconstruction with nonzero boundary data") {
    // wave-like catalog entry: u(x, 0) = x^4 with data entering through the
    // boundary-trace coefficients
    const ExampleProblem prob = make_example("ex2", 2.0);
    const BoundaryMesh mesh = discretize_boundary(prob.curve, 32);
    const InteriorNodes interior = generate_interior_nodes(prob.curve, 16);
    const RbfSet rbf{interior.points,
                     prob.curve.diameter() / std::sqrt(16.0)};
    const BoundaryOps bops = assemble_boundary_ops(mesh);
    const DomainOps dops = assemble_domain_ops(mesh, interior, rbf);
    const ReducedMaps maps = reduce_dirichlet(bops, dops);
    const ChebBasis basis{8, 0.5};
    const ReducedOdeSystem sys =
        build_ode_system(prob.pde, maps, mesh, interior, basis);
    REQUIRE(sys.m == 2);
    const int d0 = static_cast<int>(Deriv::u);
    const Eigen::VectorXd phi0 = cheb_phi(basis, 0.0);
    const Eigen::VectorXd rec =
        sys.Umap[d0] * sys.b_init[0] + sys.c_coeffs[d0] * phi0;
    for (int p = 0; p < interior.size(); ++p)
        CHECK(rec[p] ==
              doctest::Approx(std::pow(interior.points(p, 0), 4))
                  .epsilon(1e-8));
}
