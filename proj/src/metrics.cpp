#include "fracbem/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace fracbem {

ErrorReport error_norms(const Eigen::VectorXd& exact,
                        const Eigen::VectorXd& approx) {
    if (approx.size() != exact.size() || approx.size() == 0)
        throw std::invalid_argument(
            "error_norms: vectors must be non-empty with equal length");
    ErrorReport rep;
    rep.samples = static_cast<int>(approx.size());
    double sum_sq = 0.0;
    for (int i = 0; i < approx.size(); ++i) {
        const double err = std::abs(approx[i] - exact[i]);
        rep.l_inf = std::max(rep.l_inf, err);
        sum_sq += err * err;
        if (std::abs(exact[i]) < 1e-14)
            ++rep.mre_skipped;
        else
            rep.mre = std::max(rep.mre, err / std::abs(exact[i]));
    }
    rep.rms = std::sqrt(sum_sq / rep.samples);
    return rep;
}

double p_zeta_order(double e1, double e2, int n1, int n2) {
    if (!(e1 > 0.0) || !(e2 > 0.0))
        throw std::invalid_argument("p_zeta_order: errors must be positive");
    if (n1 <= 0 || n2 <= 0 || n1 == n2)
        throw std::invalid_argument("p_zeta_order: need distinct positive n");
    // zeta = 1/n, so log(zeta1/zeta2) = log(n2/n1).
    return std::log(e1 / e2) /
           std::log(static_cast<double>(n2) / static_cast<double>(n1));
}

PTauReport p_tau_order(const Eigen::VectorXd& b1, const Eigen::VectorXd& b2,
                       const Eigen::VectorXd& b3, int k1, int k2, int k3) {
    if (b1.size() != b2.size() || b2.size() != b3.size() || b1.size() == 0)
        throw std::invalid_argument(
            "p_tau_order: solution samples must share a common grid");
    if (!(k1 < k2 && k2 < k3))
        throw std::invalid_argument("p_tau_order: need k1 < k2 < k3");
    if (k2 % k1 != 0 || k3 % k2 != 0 || k2 / k1 != k3 / k2)
        throw std::invalid_argument(
            "p_tau_order: resolutions must form a geometric progression");
    PTauReport rep;
    const double n = std::sqrt(static_cast<double>(b1.size()));
    rep.diff21 = (b2 - b1).norm() / n;
    rep.diff32 = (b3 - b2).norm() / n;
    if (!(rep.diff21 > 0.0) || !(rep.diff32 > 0.0))
        throw std::invalid_argument("p_tau_order: differences must be nonzero");
    rep.order = std::log(rep.diff21 / rep.diff32) /
                std::log(static_cast<double>(k2) / static_cast<double>(k1));
    return rep;
}

}  // namespace fracbem
