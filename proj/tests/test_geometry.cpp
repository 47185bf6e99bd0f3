#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "fracbem/geometry.hpp"

using namespace fracbem;

namespace {

BoundaryCurve star_curve() {
    const double a = 3.0, b = 1.3;
    return make_polar_curve([a, b](double th) {
        const double c = std::cos(th), s = std::sin(th);
        const double w1 = c * c / (a * a) + s * s / (b * b);
        const double w2 = c * c / (b * b) + s * s / (a * a);
        return std::sqrt(a * b) / (std::pow(w1, 0.25) * std::pow(w2, 0.25));
    });
}

}  // namespace

TEST_CASE("disk mesh: nodes sit at the chord-midpoint radius") {
    const BoundaryCurve disk = make_disk(1.0);
    const BoundaryMesh mesh = discretize_boundary(disk, 4);
    REQUIRE(mesh.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(mesh.node.row(i).norm() ==
              doctest::Approx(std::cos(M_PI / 4.0)).epsilon(1e-13));
        // outward normal is radial at the node
        const Eigen::Vector2d n = mesh.normal.row(i);
        const Eigen::Vector2d rad = mesh.node.row(i).normalized();
        CHECK(n.dot(rad) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    // endpoints on the circle
    CHECK(mesh.a.row(2).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("unit square with 8 elements: pinned node positions") {
    const BoundaryCurve sq = make_rectangle({0.0, 0.0}, {1.0, 1.0});
    const BoundaryMesh mesh = discretize_boundary(sq, 8);
    REQUIRE(mesh.size() == 8);
    const std::vector<Eigen::Vector2d> expect = {
        {0.25, 0.0}, {0.75, 0.0}, {1.0, 0.25}, {1.0, 0.75},
        {0.75, 1.0}, {0.25, 1.0}, {0.0, 0.75}, {0.0, 0.25}};
    for (int i = 0; i < 8; ++i) {
        CHECK((mesh.node.row(i).transpose() - expect[i]).norm() < 1e-13);
        CHECK(mesh.length[i] == doctest::Approx(0.5).epsilon(1e-13));
    }
    // corners are element endpoints, never nodes
    for (int i = 0; i < 8; ++i) {
        const Eigen::Vector2d nd = mesh.node.row(i);
        const bool at_corner = (std::abs(nd.x()) < 1e-12 ||
                                std::abs(nd.x() - 1.0) < 1e-12) &&
                               (std::abs(nd.y()) < 1e-12 ||
                                std::abs(nd.y() - 1.0) < 1e-12);
        CHECK_FALSE(at_corner);
    }
    // outward normals
    CHECK((mesh.normal.row(0).transpose() -
           Eigen::Vector2d(0.0, -1.0)).norm() < 1e-13);
    CHECK((mesh.normal.row(2).transpose() -
           Eigen::Vector2d(1.0, 0.0)).norm() < 1e-13);
}

TEST_CASE("rectangle with unequal sides apportions by arclength") {
    const BoundaryCurve rect = make_rectangle({0.0, 0.0}, {4.0, 1.0});
    const BoundaryMesh mesh = discretize_boundary(rect, 20);
    REQUIRE(mesh.size() == 20);
    CHECK(polygon_perimeter(mesh) == doctest::Approx(10.0).epsilon(1e-13));
    // every element lies on exactly one side (no element spans a corner)
    for (int i = 0; i < mesh.size(); ++i) {
        const Eigen::Vector2d a = mesh.a.row(i), b = mesh.b.row(i);
        const bool same_side = (a.x() == b.x()) || (a.y() == b.y());
        CHECK(same_side);
    }
}

TEST_CASE("interior lattice on the unit square hits the pinned layout") {
    const BoundaryCurve sq = make_rectangle({0.0, 0.0}, {1.0, 1.0});
    const InteriorNodes nodes = generate_interior_nodes(sq, 9);
    REQUIRE(nodes.size() == 9);
    std::set<std::pair<double, double>> got;
    for (int i = 0; i < 9; ++i)
        got.insert({std::round(nodes.points(i, 0) * 1e12) / 1e12,
                    std::round(nodes.points(i, 1) * 1e12) / 1e12});
    for (double x : {0.25, 0.5, 0.75})
        for (double y : {0.25, 0.5, 0.75})
            CHECK(got.count({x, y}) == 1);
    CHECK_FALSE(nodes.triangles.empty());
}

TEST_CASE("interior nodes respect the margin and count band") {
    for (int target : {25, 100}) {
        const BoundaryCurve star = star_curve();
        const InteriorNodes nodes = generate_interior_nodes(star, target);
        const double w = star.bbox_max.x() - star.bbox_min.x();
        const double h = star.bbox_max.y() - star.bbox_min.y();
        const double margin = 0.5 * std::sqrt(w * h / target);
        CHECK(nodes.size() >= static_cast<int>(std::ceil(0.8 * target)));
        CHECK(nodes.size() <= static_cast<int>(std::floor(1.2 * target)));
        // all nodes strictly inside, and well away from the boundary
        const int nb = 4096;
        for (int i = 0; i < nodes.size(); ++i) {
            const Eigen::Vector2d p = nodes.points.row(i);
            CHECK(star.inside(p));
            double dist = 1e300;
            Eigen::Vector2d prev = star.point(0.0);
            for (int k = 1; k <= nb; ++k) {
                const Eigen::Vector2d q =
                    star.point(static_cast<double>(k % nb) / nb);
                const Eigen::Vector2d ab = q - prev;
                double t = (p - prev).dot(ab) / ab.squaredNorm();
                t = std::clamp(t, 0.0, 1.0);
                dist = std::min(dist, (p - (prev + t * ab)).norm());
                prev = q;
            }
            CHECK(dist >= margin * (1.0 - 1e-6));
        }
    }
}

TEST_CASE("star-shaped boundary perimeter within 1% at N=50") {
    const BoundaryCurve star = star_curve();
    const BoundaryMesh mesh = discretize_boundary(star, 50);
    // dense arclength oracle
    double arc = 0.0;
    const int fine = 200000;
    Eigen::Vector2d prev = star.point(0.0);
    for (int i = 1; i <= fine; ++i) {
        const Eigen::Vector2d p = star.point(static_cast<double>(i % fine) / fine);
        arc += (p - prev).norm();
        prev = p;
    }
    CHECK(std::abs(polygon_perimeter(mesh) - arc) / arc < 0.01);
}

TEST_CASE("boundary refinement halves the element length") {
    const BoundaryCurve sq = make_rectangle({0.0, 0.0}, {2.0, 1.0});
    const BoundaryMesh m1 = discretize_boundary(sq, 24);
    const BoundaryMesh m2 = discretize_boundary(sq, 48);
    CHECK(m1.length.maxCoeff() ==
          doctest::Approx(2.0 * m2.length.maxCoeff()).epsilon(1e-12));
    const BoundaryCurve disk = make_disk(1.5);
    const BoundaryMesh d1 = discretize_boundary(disk, 16);
    const BoundaryMesh d2 = discretize_boundary(disk, 32);
    // chord ratio 2 cos(pi/32) for the curved boundary
    CHECK(d1.length.maxCoeff() / d2.length.maxCoeff() ==
          doctest::Approx(2.0 * std::cos(M_PI / 32.0)).epsilon(1e-12));
}

TEST_CASE("delaunay triangulation satisfies the empty-circumcircle property") {
    // deterministic scattered points plus a cocircular-heavy lattice
    auto check_empty = [](const Eigen::MatrixX2d& pts,
                          const std::vector<std::array<int, 3>>& tris) {
        REQUIRE_FALSE(tris.empty());
        for (const auto& t : tris) {
            const Eigen::Vector2d a = pts.row(t[0]), b = pts.row(t[1]),
                                  c = pts.row(t[2]);
            const double d = 2.0 * (a.x() * (b.y() - c.y()) +
                                    b.x() * (c.y() - a.y()) +
                                    c.x() * (a.y() - b.y()));
            REQUIRE(std::abs(d) > 1e-14);
            const double a2 = a.squaredNorm(), b2 = b.squaredNorm(),
                         c2 = c.squaredNorm();
            const Eigen::Vector2d cc(
                (a2 * (b.y() - c.y()) + b2 * (c.y() - a.y()) +
                 c2 * (a.y() - b.y())) /
                    d,
                (a2 * (c.x() - b.x()) + b2 * (a.x() - c.x()) +
                 c2 * (b.x() - a.x())) /
                    d);
            const double r2 = (a - cc).squaredNorm();
            for (int p = 0; p < pts.rows(); ++p) {
                if (p == t[0] || p == t[1] || p == t[2]) continue;
                const double d2 = (pts.row(p).transpose() - cc).squaredNorm();
                CHECK(d2 >= r2 * (1.0 - 1e-9));
            }
        }
    };
    Eigen::MatrixX2d scattered(12, 2);
    scattered << 0.1, 0.2, 0.9, 0.15, 0.5, 0.55, 0.25, 0.85, 0.75, 0.8, 0.05,
        0.6, 0.6, 0.05, 0.95, 0.5, 0.4, 0.35, 0.15, 0.45, 0.85, 0.35, 0.5,
        0.95;
    check_empty(scattered, delaunay(scattered));

    Eigen::MatrixX2d lattice(16, 2);
    int r = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) lattice.row(r++) << 0.2 * i, 0.2 * j;
    check_empty(lattice, delaunay(lattice));
}

TEST_CASE("delaunay output is deterministic") {
    Eigen::MatrixX2d pts(8, 2);
    pts << 0.0, 0.0, 1.0, 0.1, 0.4, 0.9, 0.8, 0.7, 0.2, 0.5, 0.6, 0.3, 0.9,
        0.95, 0.05, 0.85;
    const auto t1 = delaunay(pts);
    const auto t2 = delaunay(pts);
    CHECK(t1 == t2);
}

TEST_CASE("polar curve membership agrees with the radius function") {
    const BoundaryCurve star = star_curve();
    // On the axes the radius is exactly ab = 3.9.
    CHECK(star.inside({0.0, 0.0}));
    CHECK(star.inside({3.85, 0.0}));
    CHECK(star.inside({0.0, 3.85}));
    CHECK_FALSE(star.inside({3.95, 0.0}));
    CHECK_FALSE(star.inside({0.0, 3.95}));
    // points on the curve scaled slightly in/out
    for (double s : {0.1, 0.37, 0.62, 0.88}) {
        const Eigen::Vector2d p = star.point(s);
        CHECK(star.inside(0.999 * p));
        CHECK_FALSE(star.inside(1.001 * p));
    }
}
