#include "fracbem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fracbem {

BoundaryCurve make_disk(double radius, const Eigen::Vector2d& center) {
    if (radius <= 0.0) throw std::invalid_argument("make_disk: radius > 0");
    BoundaryCurve c;
    c.point = [radius, center](double s) {
        const double th = 2.0 * M_PI * s;
        return Eigen::Vector2d(center.x() + radius * std::cos(th),
                               center.y() + radius * std::sin(th));
    };
    c.inside = [radius, center](const Eigen::Vector2d& p) {
        return (p - center).norm() < radius;
    };
    c.bbox_min = center - Eigen::Vector2d(radius, radius);
    c.bbox_max = center + Eigen::Vector2d(radius, radius);
    return c;
}

BoundaryCurve make_rectangle(const Eigen::Vector2d& lo,
                             const Eigen::Vector2d& hi) {
    if (!(lo.x() < hi.x() && lo.y() < hi.y()))
        throw std::invalid_argument("make_rectangle: lo < hi required");
    const double w = hi.x() - lo.x(), h = hi.y() - lo.y();
    const double per = 2.0 * (w + h);
    // Corners at arclength fractions, so equal parameter steps are equal
    // arclength steps along each side.
    const std::vector<double> brk = {0.0, w / per, (w + h) / per,
                                     (2.0 * w + h) / per};
    BoundaryCurve c;
    c.point = [lo, hi, w, h, per, brk](double s) -> Eigen::Vector2d {
        s -= std::floor(s);
        const double d = s * per;  // arclength along the perimeter, CCW
        if (d <= w) return {lo.x() + d, lo.y()};
        if (d <= w + h) return {hi.x(), lo.y() + (d - w)};
        if (d <= 2.0 * w + h) return {hi.x() - (d - w - h), hi.y()};
        return {lo.x(), hi.y() - (d - 2.0 * w - h)};
    };
    c.inside = [lo, hi](const Eigen::Vector2d& p) {
        return p.x() > lo.x() && p.x() < hi.x() && p.y() > lo.y() &&
               p.y() < hi.y();
    };
    c.corners = brk;
    c.bbox_min = lo;
    c.bbox_max = hi;
    return c;
}

BoundaryCurve make_polar_curve(const std::function<double(double)>& radius) {
    BoundaryCurve c;
    c.point = [radius](double s) {
        const double th = 2.0 * M_PI * s;
        const double r = radius(th);
        return Eigen::Vector2d(r * std::cos(th), r * std::sin(th));
    };
    c.inside = [radius](const Eigen::Vector2d& p) {
        const double r = p.norm();
        if (r == 0.0) return true;
        return r < radius(std::atan2(p.y(), p.x()));
    };
    Eigen::Vector2d mn(1e300, 1e300), mx(-1e300, -1e300);
    const int samples = 4096;
    for (int i = 0; i < samples; ++i) {
        const Eigen::Vector2d p = c.point(static_cast<double>(i) / samples);
        mn = mn.cwiseMin(p);
        mx = mx.cwiseMax(p);
    }
    c.bbox_min = mn;
    c.bbox_max = mx;
    return c;
}

namespace {

double segment_arclength(const BoundaryCurve& curve, double s0, double s1,
                         int subdiv = 256) {
    double len = 0.0;
    Eigen::Vector2d prev = curve.point(s0);
    for (int i = 1; i <= subdiv; ++i) {
        const Eigen::Vector2d p = curve.point(s0 + (s1 - s0) * i / subdiv);
        len += (p - prev).norm();
        prev = p;
    }
    return len;
}

// Apportion n elements over segments proportionally to length (largest
// remainder, each segment at least one element, deterministic ties).
std::vector<int> apportion(const std::vector<double>& lengths, int n) {
    const int k = static_cast<int>(lengths.size());
    const double total = std::accumulate(lengths.begin(), lengths.end(), 0.0);
    std::vector<int> counts(k);
    std::vector<std::pair<double, int>> rema(k);
    int assigned = 0;
    for (int i = 0; i < k; ++i) {
        const double exact = n * lengths[i] / total;
        counts[i] = static_cast<int>(std::floor(exact));
        rema[i] = {exact - counts[i], i};
        assigned += counts[i];
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int r = 0; r < n - assigned; ++r) ++counts[rema[r % k].second];
    for (int i = 0; i < k; ++i) {
        while (counts[i] == 0) {
            int j = static_cast<int>(
                std::max_element(counts.begin(), counts.end()) -
                counts.begin());
            --counts[j];
            ++counts[i];
        }
    }
    return counts;
}

}  // namespace

BoundaryMesh discretize_boundary(const BoundaryCurve& curve, int n_elements) {
    if (n_elements < 3)
        throw std::invalid_argument("discretize_boundary: need >= 3 elements");
    std::vector<double> s_ends;
    if (curve.corners.empty()) {
        s_ends.resize(n_elements + 1);
        for (int i = 0; i <= n_elements; ++i)
            s_ends[i] = static_cast<double>(i) / n_elements;
    } else {
        const int nseg = static_cast<int>(curve.corners.size());
        if (n_elements < nseg)
            throw std::invalid_argument(
                "discretize_boundary: fewer elements than corners");
        std::vector<double> seg_len(nseg);
        for (int i = 0; i < nseg; ++i) {
            const double s0 = curve.corners[i];
            const double s1 =
                (i + 1 < nseg) ? curve.corners[i + 1] : curve.corners[0] + 1.0;
            seg_len[i] = segment_arclength(curve, s0, s1);
        }
        const std::vector<int> counts = apportion(seg_len, n_elements);
        for (int i = 0; i < nseg; ++i) {
            const double s0 = curve.corners[i];
            const double s1 =
                (i + 1 < nseg) ? curve.corners[i + 1] : curve.corners[0] + 1.0;
            for (int j = 0; j < counts[i]; ++j)
                s_ends.push_back(s0 + (s1 - s0) * j / counts[i]);
        }
        s_ends.push_back(curve.corners[0] + 1.0);
    }

    BoundaryMesh mesh;
    const int n = n_elements;
    mesh.a.resize(n, 2);
    mesh.b.resize(n, 2);
    mesh.node.resize(n, 2);
    mesh.normal.resize(n, 2);
    mesh.length.resize(n);
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d pa = curve.point(s_ends[i]);
        const Eigen::Vector2d pb = curve.point(s_ends[i + 1]);
        const Eigen::Vector2d d = pb - pa;
        const double len = d.norm();
        mesh.a.row(i) = pa;
        mesh.b.row(i) = pb;
        mesh.node.row(i) = 0.5 * (pa + pb);
        // Outward normal for counterclockwise traversal.
        mesh.normal.row(i) = Eigen::Vector2d(d.y() / len, -d.x() / len);
        mesh.length[i] = len;
    }
    return mesh;
}

namespace {

double point_segment_distance(const Eigen::Vector2d& p,
                              const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double denom = ab.squaredNorm();
    double t = denom > 0.0 ? (p - a).dot(ab) / denom : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

}  // namespace

InteriorNodes generate_interior_nodes(const BoundaryCurve& curve,
                                      int target_m) {
    if (target_m < 3)
        throw std::invalid_argument("generate_interior_nodes: target >= 3");
    const double w = curve.bbox_max.x() - curve.bbox_min.x();
    const double h = curve.bbox_max.y() - curve.bbox_min.y();
    const double margin = 0.5 * std::sqrt(w * h / target_m);

    // Dense boundary polyline for distance queries.
    const int nb = 2048;
    std::vector<Eigen::Vector2d> poly(nb + 1);
    for (int i = 0; i <= nb; ++i)
        poly[i] = curve.point(static_cast<double>(i % nb) / nb);
    auto boundary_distance = [&](const Eigen::Vector2d& p) {
        double d = 1e300;
        for (int i = 0; i < nb; ++i)
            d = std::min(d, point_segment_distance(p, poly[i], poly[i + 1]));
        return d;
    };

    auto lattice = [&](int nx, int ny) {
        std::vector<Eigen::Vector2d> pts;
        for (int j = 1; j <= ny; ++j) {
            const double y = curve.bbox_min.y() + h * j / (ny + 1);
            for (int i = 1; i <= nx; ++i) {
                const Eigen::Vector2d p(curve.bbox_min.x() + w * i / (nx + 1),
                                        y);
                if (curve.inside(p) && boundary_distance(p) >= margin * (1 - 1e-12))
                    pts.push_back(p);
            }
        }
        return pts;
    };

    int nx = std::max(1, static_cast<int>(std::lround(
                             std::sqrt(target_m * w / std::max(h, 1e-300)))));
    int ny = std::max(1, static_cast<int>(std::lround(
                             static_cast<double>(target_m) / nx)));
    std::vector<Eigen::Vector2d> best;
    long best_gap = -1;
    for (int it = 0; it < 80; ++it) {
        const std::vector<Eigen::Vector2d> pts = lattice(nx, ny);
        const long count = static_cast<long>(pts.size());
        const long gap = std::labs(count - target_m);
        if (best_gap < 0 || gap < best_gap) {
            best_gap = gap;
            best = pts;
        }
        if (count >= static_cast<long>(std::ceil(0.8 * target_m)) &&
            count <= static_cast<long>(std::floor(1.2 * target_m)))
            break;
        if (count < target_m) {
            if (nx * h <= ny * w || ny >= 4 * nx)
                ++nx;
            else
                ++ny;
        } else {
            if (nx >= ny && nx > 1)
                --nx;
            else if (ny > 1)
                --ny;
            else
                break;
        }
    }
    if (best.empty())
        throw std::runtime_error(
            "generate_interior_nodes: no admissible interior lattice");

    InteriorNodes out;
    out.points.resize(static_cast<int>(best.size()), 2);
    for (int i = 0; i < static_cast<int>(best.size()); ++i)
        out.points.row(i) = best[i];
    out.triangles = delaunay(out.points);
    return out;
}

namespace {

struct Tri {
    int v[3];
    Eigen::Vector2d cc;  // circumcenter
    double r2;           // squared circumradius
};

Tri make_tri(const std::vector<Eigen::Vector2d>& pts, int i, int j, int k) {
    Tri t;
    t.v[0] = i;
    t.v[1] = j;
    t.v[2] = k;
    const Eigen::Vector2d &a = pts[i], &b = pts[j], &c = pts[k];
    const double d = 2.0 * (a.x() * (b.y() - c.y()) + b.x() * (c.y() - a.y()) +
                            c.x() * (a.y() - b.y()));
    if (std::abs(d) < 1e-300) {
        t.cc = a;
        t.r2 = 1e300;  // degenerate: treat as all-containing
        return t;
    }
    const double a2 = a.squaredNorm(), b2 = b.squaredNorm(),
                 c2 = c.squaredNorm();
    t.cc.x() = (a2 * (b.y() - c.y()) + b2 * (c.y() - a.y()) +
                c2 * (a.y() - b.y())) /
               d;
    t.cc.y() = (a2 * (c.x() - b.x()) + b2 * (a.x() - c.x()) +
                c2 * (b.x() - a.x())) /
               d;
    t.r2 = (pts[i] - t.cc).squaredNorm();
    return t;
}

}  // namespace

std::vector<std::array<int, 3>> delaunay(const Eigen::MatrixX2d& points) {
    const int n = static_cast<int>(points.rows());
    std::vector<std::array<int, 3>> result;
    if (n < 3) return result;

    std::vector<Eigen::Vector2d> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = points.row(i);
    Eigen::Vector2d mn = pts[0], mx = pts[0];
    for (const auto& p : pts) {
        mn = mn.cwiseMin(p);
        mx = mx.cwiseMax(p);
    }
    const Eigen::Vector2d c = 0.5 * (mn + mx);
    const double span = std::max((mx - mn).norm(), 1e-12);
    pts.push_back(c + Eigen::Vector2d(-30.0 * span, -15.0 * span));
    pts.push_back(c + Eigen::Vector2d(30.0 * span, -15.0 * span));
    pts.push_back(c + Eigen::Vector2d(0.0, 30.0 * span));

    std::vector<Tri> tris = {make_tri(pts, n, n + 1, n + 2)};
    for (int p = 0; p < n; ++p) {
        // Triangles whose circumcircle contains point p (1e-9 relative slack
        // keeps cocircular lattice quadruples stable).
        std::vector<int> bad;
        for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
            const double d2 = (pts[p] - tris[t].cc).squaredNorm();
            if (d2 < tris[t].r2 * (1.0 - 1e-9)) bad.push_back(t);
        }
        // Boundary of the cavity: edges used by exactly one bad triangle.
        std::vector<std::array<int, 2>> edges;
        for (int tb : bad)
            for (int e = 0; e < 3; ++e)
                edges.push_back({tris[tb].v[e], tris[tb].v[(e + 1) % 3]});
        std::vector<std::array<int, 2>> polygon;
        for (const auto& e : edges) {
            bool shared = false;
            for (const auto& f : edges)
                if (e[0] == f[1] && e[1] == f[0]) {
                    shared = true;
                    break;
                }
            if (!shared) polygon.push_back(e);
        }
        for (auto it = bad.rbegin(); it != bad.rend(); ++it)
            tris.erase(tris.begin() + *it);
        for (const auto& e : polygon)
            tris.push_back(make_tri(pts, e[0], e[1], p));
    }

    for (const auto& t : tris) {
        if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
        std::array<int, 3> tri = {t.v[0], t.v[1], t.v[2]};
        // Canonical orientation (counterclockwise) and vertex order.
        const Eigen::Vector2d ab = pts[tri[1]] - pts[tri[0]];
        const Eigen::Vector2d ac = pts[tri[2]] - pts[tri[0]];
        if (ab.x() * ac.y() - ab.y() * ac.x() < 0.0) std::swap(tri[1], tri[2]);
        int lo = 0;
        for (int i = 1; i < 3; ++i)
            if (tri[i] < tri[lo]) lo = i;
        std::rotate(tri.begin(), tri.begin() + lo, tri.end());
        result.push_back(tri);
    }
    std::sort(result.begin(), result.end());
    return result;
}

double polygon_perimeter(const BoundaryMesh& mesh) {
    return mesh.length.sum();
}

}  // namespace fracbem
