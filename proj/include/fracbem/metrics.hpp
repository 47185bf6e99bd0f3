#pragma once

#include <Eigen/Dense>

// Error norms and empirical convergence orders.
namespace fracbem {

struct ErrorReport {
    double l_inf = 0.0;
    double mre = 0.0;  // max relative error over non-negligible exact entries
    double rms = 0.0;
    int samples = 0;
    int mre_skipped = 0;  // entries with |exact| < 1e-14 excluded from MRE
};

ErrorReport error_norms(const Eigen::VectorXd& exact,
                        const Eigen::VectorXd& approx);

// Boundary-refinement order: log(E1/E2) / log(zeta1/zeta2) with zeta = 1/N.
// Requires positive errors and N1 != N2.
double p_zeta_order(double e1, double e2, int n1, int n2);

struct PTauReport {
    double diff21 = 0.0;  // ||b2 - b1||, RMS norm
    double diff32 = 0.0;  // ||b3 - b2||
    double order = 0.0;   // log(diff21/diff32) / log(K2/K1)
};

// Degree-refinement order from three solves at K1 < K2 < K3 with
// K2/K1 == K3/K2 (exact integer ratio required).
PTauReport p_tau_order(const Eigen::VectorXd& b1, const Eigen::VectorXd& b2,
                       const Eigen::VectorXd& b3, int k1, int k2, int k3);

}  // namespace fracbem
