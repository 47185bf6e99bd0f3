#include "fracbem/bem.hpp"

#include <cmath>
#include <stdexcept>

#include "fracbem/special.hpp"

namespace fracbem {

double multiquadric_w(double r2, double c) {
    const double s = std::sqrt(r2 + c * c);
    return (r2 + 2.0 * c * c) / (3.0 * s) -
           c * c * c / (3.0 * s * (c + s));
}

double multiquadric_v(double r2, double c) {
    const double s = std::sqrt(r2 + c * c);
    const double s3 = s * s * s;
    return r2 / (3.0 * s3) +
           c * c * c * (c + 2.0 * s) / (3.0 * s3 * (c + s) * (c + s));
}

ParticularSolution multiquadric_particular(double r, double c) {
    const double r2 = r * r;
    const double s = std::sqrt(r2 + c * c);
    ParticularSolution p;
    p.u = (4.0 * c * c + r2) * s / 9.0 - (c * c * c / 3.0) * std::log(c + s);
    const double w = multiquadric_w(r2, c);
    p.u_r = w * r;
    p.u_rr = w + r2 * multiquadric_v(r2, c);
    return p;
}

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Fundamental solution u* = ln r / (2 pi) of the Laplacian and its
// derivatives with respect to the field point x; d = x - y.
inline double ker_us(const Eigen::Vector2d& d, Deriv pq) {
    const double r2 = d.squaredNorm();
    switch (pq) {
        case Deriv::u:
            return std::log(r2) / (2.0 * kTwoPi);
        case Deriv::x:
            return d.x() / (kTwoPi * r2);
        case Deriv::y:
            return d.y() / (kTwoPi * r2);
        case Deriv::xx:
            return (1.0 - 2.0 * d.x() * d.x() / r2) / (kTwoPi * r2);
        case Deriv::yy:
            return (1.0 - 2.0 * d.y() * d.y() / r2) / (kTwoPi * r2);
        case Deriv::xy:
            return -2.0 * d.x() * d.y() / (kTwoPi * r2 * r2);
    }
    return 0.0;
}

// Normal derivative kernel u*_n = d u*/d n(y) and its field-point
// derivatives; n is the outward normal at the integration point y.
inline double ker_un(const Eigen::Vector2d& d, const Eigen::Vector2d& n,
                     Deriv pq) {
    const double r2 = d.squaredNorm();
    const double dn = d.dot(n);
    switch (pq) {
        case Deriv::u:
            return -dn / (kTwoPi * r2);
        case Deriv::x:
            return -(n.x() / r2 - 2.0 * dn * d.x() / (r2 * r2)) / kTwoPi;
        case Deriv::y:
            return -(n.y() / r2 - 2.0 * dn * d.y() / (r2 * r2)) / kTwoPi;
        case Deriv::xx:
            return 2.0 *
                   ((2.0 * n.x() * d.x() + dn) / (r2 * r2) -
                    4.0 * dn * d.x() * d.x() / (r2 * r2 * r2)) /
                   kTwoPi;
        case Deriv::yy:
            return 2.0 *
                   ((2.0 * n.y() * d.y() + dn) / (r2 * r2) -
                    4.0 * dn * d.y() * d.y() / (r2 * r2 * r2)) /
                   kTwoPi;
        case Deriv::xy:
            return 2.0 *
                   ((n.x() * d.y() + n.y() * d.x()) / (r2 * r2) -
                    4.0 * dn * d.x() * d.y() / (r2 * r2 * r2)) /
                   kTwoPi;
    }
    return 0.0;
}

// Derivatives of the particular solution uhat centered at ck, evaluated at x.
inline double rbf_deriv(const Eigen::Vector2d& x, const Eigen::Vector2d& ck,
                        double c, Deriv pq) {
    const Eigen::Vector2d d = x - ck;
    const double r2 = d.squaredNorm();
    switch (pq) {
        case Deriv::u:
            return multiquadric_particular(std::sqrt(r2), c).u;
        case Deriv::x:
            return multiquadric_w(r2, c) * d.x();
        case Deriv::y:
            return multiquadric_w(r2, c) * d.y();
        case Deriv::xx:
            return multiquadric_w(r2, c) +
                   multiquadric_v(r2, c) * d.x() * d.x();
        case Deriv::yy:
            return multiquadric_w(r2, c) +
                   multiquadric_v(r2, c) * d.y() * d.y();
        case Deriv::xy:
            return multiquadric_v(r2, c) * d.x() * d.y();
    }
    return 0.0;
}

struct ElemQuad {
    Eigen::MatrixX2d y;  // gauss points on the element
    Eigen::VectorXd w;   // weights including the length jacobian
};

ElemQuad element_quad(const BoundaryMesh& mesh, int j, const GaussRule& rule) {
    ElemQuad q;
    const int g = static_cast<int>(rule.x.size());
    q.y.resize(g, 2);
    q.w.resize(g);
    const Eigen::Vector2d a = mesh.a.row(j), b = mesh.b.row(j);
    for (int i = 0; i < g; ++i) {
        q.y.row(i) = 0.5 * (a + b) + 0.5 * rule.x[i] * (b - a);
        q.w[i] = 0.5 * mesh.length[j] * rule.w[i];
    }
    return q;
}

double point_segment_dist(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                          const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    double t = ab.squaredNorm() > 0.0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0;
    t = std::min(std::max(t, 0.0), 1.0);
    return (p - (a + t * ab)).norm();
}

// Analytic integral of u* over a straight element against its own midpoint:
// int_{-l/2}^{l/2} ln|s|/(2 pi) ds = (l / 2 pi)(ln(l/2) - 1).
double self_single_layer(double len) {
    return len / kTwoPi * (std::log(0.5 * len) - 1.0);
}

}  // namespace

BoundaryOps assemble_boundary_ops(const BoundaryMesh& mesh) {
    const int n = mesh.size();
    const GaussRule rule8 = gauss_legendre(8);
    const GaussRule rule32 = gauss_legendre(32);
    std::vector<ElemQuad> quad8(n), quad32(n);
    for (int j = 0; j < n; ++j) {
        quad8[j] = element_quad(mesh, j, rule8);
        quad32[j] = element_quad(mesh, j, rule32);
    }

    BoundaryOps ops;
    ops.H = Eigen::MatrixXd::Zero(n, n);
    ops.G = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d xi = mesh.node.row(i);
        for (int j = 0; j < n; ++j) {
            if (j == i) {
                ops.G(i, i) = -self_single_layer(mesh.length[i]);
                continue;  // H diagonal from the row-sum identity below
            }
            const bool near =
                point_segment_dist(xi, mesh.a.row(j), mesh.b.row(j)) <
                mesh.length[j];
            const ElemQuad& q = near ? quad32[j] : quad8[j];
            const Eigen::Vector2d nj = mesh.normal.row(j);
            double hij = 0.0, gij = 0.0;
            for (int g = 0; g < q.w.size(); ++g) {
                const Eigen::Vector2d d = xi - q.y.row(g).transpose();
                hij += q.w[g] * ker_un(d, nj, Deriv::u);
                gij += q.w[g] * ker_us(d, Deriv::u);
            }
            ops.H(i, j) = -hij;
            ops.G(i, j) = -gij;
        }
        ops.H(i, i) = 0.0;
        ops.H(i, i) = -ops.H.row(i).sum();
    }
    return ops;
}

DomainOps assemble_domain_ops(const BoundaryMesh& mesh,
                              const InteriorNodes& interior,
                              const RbfSet& rbf) {
    const int n = mesh.size();
    const int m = static_cast<int>(rbf.centers.rows());
    const int mi = interior.size();
    const double c = rbf.c;
    const GaussRule rule8 = gauss_legendre(8);
    const GaussRule rule32 = gauss_legendre(32);

    // Per-element quadrature and tables of the particular solutions
    // uhat_k(y_g) and their normal derivatives at the gauss points.
    std::vector<ElemQuad> quad8(n), quad32(n);
    std::vector<Eigen::MatrixXd> uh8(n), unh8(n), uh32(n), unh32(n);
    for (int j = 0; j < n; ++j) {
        quad8[j] = element_quad(mesh, j, rule8);
        quad32[j] = element_quad(mesh, j, rule32);
        const Eigen::Vector2d nj = mesh.normal.row(j);
        for (int pass = 0; pass < 2; ++pass) {
            const ElemQuad& q = pass == 0 ? quad8[j] : quad32[j];
            Eigen::MatrixXd uh(q.w.size(), m), unh(q.w.size(), m);
            for (int g = 0; g < q.w.size(); ++g) {
                const Eigen::Vector2d y = q.y.row(g);
                for (int k = 0; k < m; ++k) {
                    const Eigen::Vector2d d =
                        y - rbf.centers.row(k).transpose();
                    const double r2 = d.squaredNorm();
                    uh(g, k) = multiquadric_particular(std::sqrt(r2), c).u;
                    unh(g, k) = multiquadric_w(r2, c) * d.dot(nj);
                }
            }
            if (pass == 0) {
                uh8[j] = std::move(uh);
                unh8[j] = std::move(unh);
            } else {
                uh32[j] = std::move(uh);
                unh32[j] = std::move(unh);
            }
        }
    }

    DomainOps ops;
    ops.Abar = Eigen::MatrixXd::Zero(n, m);

    // Boundary collocation rows of the particular-solution responses.
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d xi = mesh.node.row(i);
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m);
        for (int j = 0; j < n; ++j) {
            if (j == i) {
                // Singular element: subtract the value at the node so the
                // remaining integrand is bounded, add back its analytic
                // single-layer integral. The double-layer term vanishes on a
                // flat element through its own node.
                const ElemQuad& q = quad8[j];
                Eigen::RowVectorXd un_node(m);
                const Eigen::Vector2d ni = mesh.normal.row(i);
                for (int k = 0; k < m; ++k) {
                    const Eigen::Vector2d d =
                        xi - rbf.centers.row(k).transpose();
                    un_node[k] = multiquadric_w(d.squaredNorm(), c) * d.dot(ni);
                }
                row += self_single_layer(mesh.length[i]) * un_node;
                for (int g = 0; g < q.w.size(); ++g) {
                    const Eigen::Vector2d d = xi - q.y.row(g).transpose();
                    const double us = ker_us(d, Deriv::u);
                    row += q.w[g] * us * (unh8[j].row(g) - un_node);
                }
                continue;
            }
            const bool near =
                point_segment_dist(xi, mesh.a.row(j), mesh.b.row(j)) <
                mesh.length[j];
            const ElemQuad& q = near ? quad32[j] : quad8[j];
            const Eigen::MatrixXd& uh = near ? uh32[j] : uh8[j];
            const Eigen::MatrixXd& unh = near ? unh32[j] : unh8[j];
            const Eigen::Vector2d nj = mesh.normal.row(j);
            for (int g = 0; g < q.w.size(); ++g) {
                const Eigen::Vector2d d = xi - q.y.row(g).transpose();
                row += q.w[g] * (ker_us(d, Deriv::u) * unh.row(g) -
                                 ker_un(d, nj, Deriv::u) * uh.row(g));
            }
        }
        for (int k = 0; k < m; ++k)
            row[k] += 0.5 * rbf_deriv(xi, rbf.centers.row(k), c, Deriv::u);
        ops.Abar.row(i) = row;
    }

    // Interior evaluation maps for value and derivatives.
    for (const Deriv d : kAllDerivs) {
        const int di = static_cast<int>(d);
        ops.Ahat[di] = Eigen::MatrixXd::Zero(mi, m);
        ops.Hhat[di] = Eigen::MatrixXd::Zero(mi, n);
        ops.Ghat[di] = Eigen::MatrixXd::Zero(mi, n);
    }
    for (int p = 0; p < mi; ++p) {
        const Eigen::Vector2d xp = interior.points.row(p);
        bool near_any = false;
        for (int j = 0; j < n; ++j) {
            const bool near =
                point_segment_dist(xp, mesh.a.row(j), mesh.b.row(j)) <
                mesh.length[j];
            near_any = near_any || near;
            const ElemQuad& q = near ? quad32[j] : quad8[j];
            const Eigen::MatrixXd& uh = near ? uh32[j] : uh8[j];
            const Eigen::MatrixXd& unh = near ? unh32[j] : unh8[j];
            const Eigen::Vector2d nj = mesh.normal.row(j);
            for (int g = 0; g < q.w.size(); ++g) {
                const Eigen::Vector2d dv = xp - q.y.row(g).transpose();
                for (const Deriv de : kAllDerivs) {
                    const int di = static_cast<int>(de);
                    const double us = ker_us(dv, de);
                    const double un = ker_un(dv, nj, de);
                    ops.Hhat[di](p, j) += q.w[g] * un;
                    ops.Ghat[di](p, j) -= q.w[g] * us;
                    ops.Ahat[di].row(p) +=
                        q.w[g] * (us * unh.row(g) - un * uh.row(g));
                }
            }
        }
        if (near_any) ++ops.near_boundary_points;
        for (const Deriv de : kAllDerivs) {
            const int di = static_cast<int>(de);
            for (int k = 0; k < m; ++k)
                ops.Ahat[di](p, k) +=
                    rbf_deriv(xp, rbf.centers.row(k), c, de);
        }
    }
    return ops;
}

ReducedMaps reduce_dirichlet(const BoundaryOps& bops, const DomainOps& dops) {
    const int n = static_cast<int>(bops.G.rows());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(bops.G);
    const Eigen::MatrixXd ginv_abar = lu.solve(dops.Abar);
    const Eigen::MatrixXd ginv_h = lu.solve(bops.H);

    ReducedMaps maps;
    for (const Deriv d : kAllDerivs) {
        const int di = static_cast<int>(d);
        maps.Umap[di] = dops.Ahat[di] - dops.Ghat[di] * ginv_abar;
        maps.Cmap[di] = dops.Hhat[di] + dops.Ghat[di] * ginv_h;
    }
    const Eigen::MatrixXd ginv =
        lu.solve(Eigen::MatrixXd::Identity(n, n));
    maps.g_condition = bops.G.cwiseAbs().colwise().sum().maxCoeff() *
                       ginv.cwiseAbs().colwise().sum().maxCoeff();
    return maps;
}

int PdeCoefficients::order_ceiling() const {
    if (terms.empty())
        throw std::invalid_argument("PdeCoefficients: no fractional terms");
    double amax = 0.0;
    for (const auto& t : terms) amax = std::max(amax, t.alpha);
    return static_cast<int>(std::ceil(amax));
}

ReducedOdeSystem build_ode_system(const PdeCoefficients& pde,
                                  const ReducedMaps& maps,
                                  const BoundaryMesh& mesh,
                                  const InteriorNodes& interior,
                                  const ChebBasis& basis) {
    const int mi = interior.size();
    const int n = mesh.size();
    const int kk = basis.K + 1;

    ReducedOdeSystem sys;
    sys.m = pde.order_ceiling();
    sys.Umap = maps.Umap;

    auto field_at_nodes = [&](const PdeCoefficients::Field& f) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(mi);
        if (f)
            for (int p = 0; p < mi; ++p) v[p] = f(interior.points.row(p));
        return v;
    };

    // Fractional-term weights and their diagonal scalings of the value map.
    std::vector<Eigen::VectorXd> gammas;
    for (const auto& term : pde.terms) {
        sys.alphas.push_back(term.alpha);
        Eigen::VectorXd g = Eigen::VectorXd::Ones(mi);
        if (term.gamma)
            for (int p = 0; p < mi; ++p) g[p] = term.gamma(interior.points.row(p));
        gammas.push_back(g);
        sys.S.push_back(g.asDiagonal() *
                        maps.Umap[static_cast<int>(Deriv::u)]);
    }

    // Right-hand-side spatial operator.
    const Eigen::VectorXd ca = field_at_nodes(pde.A);
    const Eigen::VectorXd cb = field_at_nodes(pde.B);
    const Eigen::VectorXd cc = field_at_nodes(pde.C);
    const Eigen::VectorXd cd = field_at_nodes(pde.D);
    const Eigen::VectorXd ce = field_at_nodes(pde.E);
    const Eigen::VectorXd cf = field_at_nodes(pde.F);
    auto um = [&](Deriv d) -> const Eigen::MatrixXd& {
        return maps.Umap[static_cast<int>(d)];
    };
    sys.Nmat = ca.asDiagonal() * um(Deriv::xx);
    sys.Nmat += 2.0 * (cb.asDiagonal() * um(Deriv::xy));
    sys.Nmat += cc.asDiagonal() * um(Deriv::yy);
    sys.Nmat += cd.asDiagonal() * um(Deriv::x);
    sys.Nmat += ce.asDiagonal() * um(Deriv::y);
    sys.Nmat += cf.asDiagonal() * um(Deriv::u);

    // Boundary-trace coefficients: each boundary node's Dirichlet history is
    // projected onto the time basis, then mapped inside.
    Eigen::MatrixXd hc;
    const bool has_h = static_cast<bool>(pde.h);
    if (has_h) {
        hc.resize(n, kk);
        for (int j = 0; j < n; ++j) {
            const Eigen::Vector2d xj = mesh.node.row(j);
            hc.row(j) =
                project(basis, [&](double t) { return pde.h(xj, t); });
        }
    }
    for (const Deriv d : kAllDerivs) {
        const int di = static_cast<int>(d);
        sys.c_coeffs[di] = has_h ? (maps.Cmap[di] * hc).eval()
                                 : Eigen::MatrixXd::Zero(mi, kk);
    }

    // Forcing coefficients.
    Eigen::MatrixXd gc = Eigen::MatrixXd::Zero(mi, kk);
    if (pde.g) {
        for (int p = 0; p < mi; ++p) {
            const Eigen::Vector2d xp = interior.points.row(p);
            gc.row(p) =
                project(basis, [&](double t) { return pde.g(xp, t); });
        }
    }
    auto cm = [&](Deriv d) -> const Eigen::MatrixXd& {
        return sys.c_coeffs[static_cast<int>(d)];
    };
    sys.f_coeffs = gc;
    if (has_h) {
        sys.f_coeffs += ca.asDiagonal() * cm(Deriv::xx);
        sys.f_coeffs += 2.0 * (cb.asDiagonal() * cm(Deriv::xy));
        sys.f_coeffs += cc.asDiagonal() * cm(Deriv::yy);
        sys.f_coeffs += cd.asDiagonal() * cm(Deriv::x);
        sys.f_coeffs += ce.asDiagonal() * cm(Deriv::y);
        sys.f_coeffs += cf.asDiagonal() * cm(Deriv::u);
        for (size_t j = 0; j < sys.alphas.size(); ++j) {
            const Eigen::MatrixXd dmat = com_fractional(basis, sys.alphas[j]);
            sys.f_coeffs -= gammas[j].asDiagonal() *
                            (cm(Deriv::u) * dmat).eval();
        }
    }

    // Initial source strengths from the initial fields.
    const Eigen::MatrixXd& u00 = um(Deriv::u);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu00(u00);
    const Eigen::VectorXd phi0 = cheb_phi(basis, 0.0);
    for (int i = 0; i < sys.m; ++i) {
        Eigen::VectorXd d_i = Eigen::VectorXd::Zero(mi);
        if (i < static_cast<int>(pde.initial.size()) && pde.initial[i])
            for (int p = 0; p < mi; ++p)
                d_i[p] = pde.initial[i](interior.points.row(p));
        if (has_h) {
            const Eigen::VectorXd dphi0 = com_integer(basis, i) * phi0;
            d_i -= cm(Deriv::u) * dphi0;
        }
        sys.b_init.push_back(lu00.solve(d_i));
    }
    const Eigen::MatrixXd u00inv =
        lu00.solve(Eigen::MatrixXd::Identity(mi, mi));
    sys.u00_condition = u00.cwiseAbs().colwise().sum().maxCoeff() *
                        u00inv.cwiseAbs().colwise().sum().maxCoeff();
    return sys;
}

}  // namespace fracbem
