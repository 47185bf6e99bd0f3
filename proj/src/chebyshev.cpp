#include "fracbem/chebyshev.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracbem/special.hpp"

namespace fracbem {

namespace {

double to_unit(const ChebBasis& basis, double t) {
    return 2.0 * t / basis.L - 1.0;
}

}  // namespace

double cheb_eval(const ChebBasis& basis, int i, double t) {
    const double x = to_unit(basis, t);
    if (i == 0) return 1.0;
    double tm1 = 1.0, tc = x;
    for (int k = 1; k < i; ++k) {
        const double tn = 2.0 * x * tc - tm1;
        tm1 = tc;
        tc = tn;
    }
    return tc;
}

Eigen::VectorXd cheb_phi(const ChebBasis& basis, double t) {
    const double x = to_unit(basis, t);
    Eigen::VectorXd phi(basis.K + 1);
    phi[0] = 1.0;
    if (basis.K >= 1) phi[1] = x;
    for (int i = 2; i <= basis.K; ++i)
        phi[i] = 2.0 * x * phi[i - 1] - phi[i - 2];
    return phi;
}

double cheb_series(const ChebBasis& basis, const Eigen::VectorXd& coef,
                   double t) {
    return coef.dot(cheb_phi(basis, t));
}

Eigen::VectorXd project(const ChebBasis& basis,
                        const std::function<double(double)>& f) {
    const int K = basis.K;
    auto coeffs_at = [&](int n) {
        // Chebyshev-Gauss nodes x_k = cos((2k-1)pi/(2n)); the discrete sums
        // ell_i = (2 - delta_{i0})/n sum f(t(x_k)) cos(i theta_k) are exact for
        // polynomials of degree <= 2n-1-i.
        Eigen::VectorXd ell = Eigen::VectorXd::Zero(K + 1);
        for (int k = 1; k <= n; ++k) {
            const double theta = (2.0 * k - 1.0) * M_PI / (2.0 * n);
            const double x = std::cos(theta);
            const double fv = f(0.5 * basis.L * (x + 1.0));
            for (int i = 0; i <= K; ++i) ell[i] += fv * std::cos(i * theta);
        }
        ell *= 2.0 / n;
        ell[0] *= 0.5;
        return ell;
    };
    int n = 2 * K + 2;
    Eigen::VectorXd prev = coeffs_at(n);
    for (int round = 0; round < 8; ++round) {
        n *= 2;
        Eigen::VectorXd next = coeffs_at(n);
        const double scale = std::max(1.0, next.cwiseAbs().maxCoeff());
        if ((next - prev).cwiseAbs().maxCoeff() <= 1e-13 * scale) return next;
        prev = next;
    }
    return prev;
}

Eigen::MatrixXd gram_matrix(const ChebBasis& basis) {
    const int K = basis.K;
    const GaussRule rule = gauss_legendre(K + 1);  // exact for degree 2K+1
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(K + 1, K + 1);
    ChebBasis unit{K, 2.0};  // T on (0,2) evaluated at x+1 equals T(x)
    for (int g = 0; g < rule.x.size(); ++g) {
        const Eigen::VectorXd phi = cheb_phi(unit, rule.x[g] + 1.0);
        W += rule.w[g] * phi * phi.transpose();
    }
    return 0.5 * basis.L * W;
}

Eigen::MatrixXd com_first(const ChebBasis& basis) {
    const int K = basis.K;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(K + 1, K + 1);
    for (int i = 1; i <= K; ++i)
        for (int j = i - 1; j >= 0; j -= 2)
            D(i, j) = 4.0 * i / ((j == 0 ? 2.0 : 1.0) * basis.L);
    return D;
}

Eigen::MatrixXd com_integer(const ChebBasis& basis, int n) {
    if (n < 0) throw std::invalid_argument("com_integer: n >= 0 required");
    const Eigen::MatrixXd D1 = com_first(basis);
    Eigen::MatrixXd D = Eigen::MatrixXd::Identity(basis.K + 1, basis.K + 1);
    for (int k = 0; k < n; ++k) D = D1 * D;
    return D;
}

namespace {

using bigfloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<150>>;

}  // namespace

Eigen::MatrixXd com_fractional(const ChebBasis& basis, double nu) {
    if (nu < 0.0) throw std::invalid_argument("com_fractional: nu >= 0");
    const double nu_round = std::round(nu);
    if (std::abs(nu - nu_round) < 1e-12)
        return com_integer(basis, static_cast<int>(nu_round));

    const int K = basis.K;
    const int m = static_cast<int>(std::ceil(nu));

    // Gamma tables in 150-digit floats. The entry sums cancel catastrophically
    // (about 0.61 digits per degree), so everything up to the final rounding
    // stays in extended precision.
    const bigfloat bnu(nu);

    // fact[n] = Gamma(n) = (n-1)! for n = 1 .. 2K+1.
    std::vector<bigfloat> fact(2 * K + 2);
    fact[1] = 1;
    for (int n = 2; n <= 2 * K + 1; ++n) fact[n] = fact[n - 1] * (n - 1);

    // ghalf[l] = Gamma(l + 1/2), upward from Gamma(1/2) = sqrt(pi).
    std::vector<bigfloat> ghalf(K + 1);
    ghalf[0] = sqrt(boost::math::constants::pi<bigfloat>());
    for (int l = 1; l <= K; ++l)
        ghalf[l] = ghalf[l - 1] * (bigfloat(l) - bigfloat(0.5));

    // gshift[l] = Gamma(l - nu + 1/2) for l = m .. K (arguments all positive).
    std::vector<bigfloat> gshift(K + 1);
    if (m <= K) {
        gshift[m] = boost::math::tgamma(bigfloat(m) - bnu + bigfloat(0.5));
        for (int l = m + 1; l <= K; ++l)
            gshift[l] = gshift[l - 1] * (bigfloat(l - 1) - bnu + bigfloat(0.5));
    }

    // gden[q - qmin] = Gamma(q - nu + 1) for q = m-K .. 2K, seeded at the
    // positive argument q = m and extended both ways by the recurrence
    // Gamma(z+1) = z Gamma(z); z is never a nonpositive integer since nu is
    // strictly fractional here.
    const int qmin = m - K;
    std::vector<bigfloat> gden(2 * K - qmin + 1);
    auto gden_at = [&](int q) -> bigfloat& { return gden[q - qmin]; };
    gden_at(m) = boost::math::tgamma(bigfloat(m) - bnu + bigfloat(1));
    for (int q = m + 1; q <= 2 * K; ++q)
        gden_at(q) = gden_at(q - 1) * (bigfloat(q) - bnu);
    for (int q = m - 1; q >= qmin; --q)
        gden_at(q) = gden_at(q + 1) / (bigfloat(q) - bnu + bigfloat(1));

    const bigfloat Lnu = pow(bigfloat(basis.L), bnu);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(K + 1, K + 1);
    for (int i = m; i <= K; ++i) {
        for (int j = 0; j <= K; ++j) {
            const bigfloat rho = (j == 0) ? 2 : 1;
            bigfloat s = 0;
            for (int l = m; l <= i; ++l) {
                bigfloat term = bigfloat(2 * i) * fact[i + l] * gshift[l];
                term /= rho * ghalf[l] * fact[i - l + 1] * gden_at(l - j) *
                        gden_at(l + j);
                if ((i - l) % 2 == 1) term = -term;
                s += term;
            }
            D(i, j) = static_cast<double>(s / Lnu);
        }
    }
    return D;
}

}  // namespace fracbem
