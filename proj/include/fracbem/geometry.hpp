#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

// Parametric boundary curves, constant-element boundary meshes, interior
// node generation, and Delaunay triangulation.
namespace fracbem {

// Closed curve parameterized by s in [0, 1); `inside` is the open-region
// membership test used when clipping interior lattices.
struct BoundaryCurve {
    std::function<Eigen::Vector2d(double)> point;
    std::function<bool(const Eigen::Vector2d&)> inside;
    // Parameter breakpoints that element endpoints must hit exactly
    // (polygon corners); empty for smooth curves.
    std::vector<double> corners;
    Eigen::Vector2d bbox_min;
    Eigen::Vector2d bbox_max;
    double diameter() const { return (bbox_max - bbox_min).norm(); }
};

BoundaryCurve make_disk(double radius,
                        const Eigen::Vector2d& center = {0.0, 0.0});
BoundaryCurve make_rectangle(const Eigen::Vector2d& lo,
                             const Eigen::Vector2d& hi);
// Star-shaped domain r = radius(theta) about the origin.
BoundaryCurve make_polar_curve(const std::function<double(double)>& radius);

// N straight constant elements: endpoints a/b on the curve, collocation node
// at the chord midpoint, outward unit normal, chord length. Corner
// breakpoints are always element endpoints, never nodes.
struct BoundaryMesh {
    Eigen::MatrixX2d a;
    Eigen::MatrixX2d b;
    Eigen::MatrixX2d node;
    Eigen::MatrixX2d normal;
    Eigen::VectorXd length;
    int size() const { return static_cast<int>(length.size()); }
};

BoundaryMesh discretize_boundary(const BoundaryCurve& curve, int n_elements);

struct InteriorNodes {
    Eigen::MatrixX2d points;
    std::vector<std::array<int, 3>> triangles;
    int size() const { return static_cast<int>(points.rows()); }
};

// Quasi-uniform lattice clipped to the interior with a boundary-offset
// margin of 0.5 sqrt(bbox area / M); the lattice pitch is adjusted until the
// accepted count is within 20% of the target. Triangulation attached.
InteriorNodes generate_interior_nodes(const BoundaryCurve& curve,
                                      int target_m);

// Delaunay triangulation (incremental Bowyer-Watson). Circumcircle
// predicates use a 1e-9 relative tolerance.
std::vector<std::array<int, 3>> delaunay(const Eigen::MatrixX2d& points);

double polygon_perimeter(const BoundaryMesh& mesh);

}  // namespace fracbem
