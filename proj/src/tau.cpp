#include "fracbem/tau.hpp"

#include <cmath>
#include <stdexcept>

namespace fracbem {

Eigen::VectorXd TauSolution::eval_b(double t) const {
    return Psi * cheb_phi(basis, t);
}

Eigen::VectorXd TauSolution::eval_b_derivative(int i, double t) const {
    return Psi * (com_integer(basis, i) * cheb_phi(basis, t));
}

namespace {

// Adds s * kron(A, B) into the target, with row blocks of B's row count and
// column blocks of B's column count.
void add_kron(Eigen::MatrixXd& target, const Eigen::MatrixXd& a,
              const Eigen::MatrixXd& b, double s) {
    const int br = static_cast<int>(b.rows());
    const int bc = static_cast<int>(b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int p = 0; p < a.cols(); ++p) {
            const double v = s * a(i, p);
            if (v != 0.0) target.block(i * br, p * bc, br, bc) += v * b;
        }
}

}  // namespace

TauSystem assemble_tau_system(const ReducedOdeSystem& sys,
                              const ChebBasis& basis) {
    const int mi = static_cast<int>(sys.Nmat.rows());
    const int kk = basis.K + 1;
    const int m = sys.m;
    const int ncol = kk - m;  // retained Galerkin projections per component
    if (ncol < 1)
        throw std::invalid_argument(
            "assemble_tau_system: K must be at least the derivative order "
            "ceiling");

    const Eigen::MatrixXd w = gram_matrix(basis);
    const Eigen::MatrixXd w_lead = w.leftCols(ncol);

    TauSystem out;
    const int dim = mi * kk;
    out.A = Eigen::MatrixXd::Zero(dim, dim);
    out.rhs = Eigen::VectorXd::Zero(dim);

    // Galerkin block: rows (i, jc) with jc the test index, fastest.
    Eigen::MatrixXd gal = Eigen::MatrixXd::Zero(mi * ncol, dim);
    for (size_t j = 0; j < sys.alphas.size(); ++j) {
        const Eigen::MatrixXd dj = com_fractional(basis, sys.alphas[j]);
        add_kron(gal, sys.S[j], (dj * w_lead).transpose(), 1.0);
    }
    add_kron(gal, sys.Nmat, w_lead.transpose(), -1.0);
    out.A.topRows(mi * ncol) = gal;
    const Eigen::MatrixXd fw = sys.f_coeffs * w_lead;  // mi x ncol
    for (int i = 0; i < mi; ++i)
        out.rhs.segment(i * ncol, ncol) = fw.row(i).transpose();

    // Initial rows: Psi D^(ic) Phi(0) = b_init[ic], one row per component.
    const Eigen::VectorXd phi0 = cheb_phi(basis, 0.0);
    for (int ic = 0; ic < m; ++ic) {
        const Eigen::VectorXd dphi0 = com_integer(basis, ic) * phi0;
        for (int p = 0; p < mi; ++p) {
            const int row = mi * ncol + ic * mi + p;
            out.A.row(row).segment(p * kk, kk) = dphi0.transpose();
            out.rhs[row] = sys.b_init[ic][p];
        }
    }
    return out;
}

TauSolution solve_tau(const ReducedOdeSystem& sys, const ChebBasis& basis) {
    const TauSystem assembled = assemble_tau_system(sys, basis);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(assembled.A);
    const Eigen::VectorXd x = lu.solve(assembled.rhs);
    if (!x.allFinite())
        throw std::runtime_error("solve_tau: linear solve produced non-finite "
                                 "coefficients");
    TauSolution sol;
    sol.basis = basis;
    const int mi = static_cast<int>(sys.Nmat.rows());
    const int kk = basis.K + 1;
    sol.Psi.resize(mi, kk);
    for (int p = 0; p < mi; ++p)
        sol.Psi.row(p) = x.segment(p * kk, kk).transpose();
    return sol;
}

Eigen::VectorXd reconstruct_field(const ReducedOdeSystem& sys,
                                  const TauSolution& sol, double t,
                                  Deriv pq) {
    const int di = static_cast<int>(pq);
    const Eigen::VectorXd phi = cheb_phi(sol.basis, t);
    return sys.Umap[di] * (sol.Psi * phi) + sys.c_coeffs[di] * phi;
}

}  // namespace fracbem
