#include "fracbem/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fracbem {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-angle initial guess, then Newton on P_n.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[n - 1 - i] = rule.w[i];
    }
    if (n % 2 == 1) rule.x[n / 2] = 0.0;
    return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < rule.x.size(); ++i)
        s += rule.w[i] * f(mid + hw * rule.x[i]);
    return s * hw;
}

double caputo_power(double alpha, double p, double t) {
    const int m = static_cast<int>(std::ceil(alpha));
    if (p <= m - 1 + 1e-14)
        throw std::invalid_argument("caputo_power: exponent too small");
    if (t == 0.0) return p - alpha > 0 ? 0.0 : std::tgamma(p + 1.0);
    return std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - alpha) *
           std::pow(t, p - alpha);
}

double caputo_monomial(double alpha, int k, double t) {
    if (alpha <= 0.0) throw std::invalid_argument("caputo_monomial: alpha > 0");
    const int m = static_cast<int>(std::ceil(alpha));
    if (k < m) return 0.0;
    return caputo_power(alpha, static_cast<double>(k), t);
}

Eigen::VectorXd fd_weights(double x0, const Eigen::VectorXd& grid, int m) {
    // Fornberg's recursion for the weights of the m-th derivative at x0,
    // on the full table c[m][n][nu].
    const int n = static_cast<int>(grid.size()) - 1;
    std::vector<double> c((m + 1) * (n + 1) * (n + 1), 0.0);
    auto at = [&](int mm, int nn, int nu) -> double& {
        return c[(mm * (n + 1) + nn) * (n + 1) + nu];
    };
    at(0, 0, 0) = 1.0;
    double c1 = 1.0;
    for (int nn = 1; nn <= n; ++nn) {
        double c2 = 1.0;
        for (int nu = 0; nu < nn; ++nu) {
            double c3 = grid[nn] - grid[nu];
            c2 *= c3;
            for (int mm = std::min(nn, m); mm >= 0; --mm) {
                double prev = (mm > 0) ? at(mm - 1, nn - 1, nu) : 0.0;
                at(mm, nn, nu) =
                    ((grid[nn] - x0) * at(mm, nn - 1, nu) - mm * prev) / c3;
            }
        }
        for (int mm = std::min(nn, m); mm >= 0; --mm) {
            double prev = (mm > 0) ? at(mm - 1, nn - 1, nn - 1) : 0.0;
            at(mm, nn, nn) =
                c1 / c2 * (mm * prev - (grid[nn - 1] - x0) * at(mm, nn - 1, nn - 1));
        }
        c1 = c2;
    }
    Eigen::VectorXd w(n + 1);
    for (int nu = 0; nu <= n; ++nu) w[nu] = at(m, n, nu);
    return w;
}

namespace {

// m-th derivative of u at tau >= 0 by a 5-point stencil of spacing h;
// one-sided near tau = 0 so u is never sampled at negative arguments.
double fd_derivative(const std::function<double(double)>& u, int m, double tau,
                     double h) {
    int left = 2;
    if (tau < 2.0 * h) left = (tau < h) ? 0 : 1;
    Eigen::VectorXd grid(5);
    for (int j = 0; j < 5; ++j) grid[j] = tau + (j - left) * h;
    const Eigen::VectorXd w = fd_weights(tau, grid, m);
    double s = 0.0;
    for (int j = 0; j < 5; ++j) s += w[j] * u(grid[j]);
    return s;
}

}  // namespace

double caputo_quadrature(const std::function<double(double)>& u, double alpha,
                         double t) {
    if (alpha <= 0.0 || t <= 0.0)
        throw std::invalid_argument("caputo_quadrature: alpha > 0, t > 0");
    const int m = static_cast<int>(std::ceil(alpha));
    const double h = 2e-3 * std::max(1.0, t);
    if (std::abs(alpha - m) < 1e-14) return fd_derivative(u, m, t, h);

    // sigma = (t - tau)^beta turns the weight into a constant:
    // D^a u(t) = 1/(Gamma(beta) beta) int_0^{t^beta} u^(m)(t - s^(1/beta)) ds.
    const double beta = m - alpha;
    const double upper = std::pow(t, beta);
    const auto integrand = [&](double sigma) {
        const double tau = t - std::pow(sigma, 1.0 / beta);
        return fd_derivative(u, m, std::min(std::max(tau, 0.0), t), h);
    };
    const GaussRule rule = gauss_legendre(16);
    double prev = std::numeric_limits<double>::infinity();
    double value = 0.0;
    for (int panels = 8; panels <= 1024; panels *= 2) {
        value = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double a = upper * p / panels;
            const double b = upper * (p + 1) / panels;
            value += integrate(integrand, a, b, rule);
        }
        if (std::abs(value - prev) <= 1e-11 * std::max(1.0, std::abs(value)))
            break;
        prev = value;
    }
    return value / (std::tgamma(beta) * beta);
}

namespace {

// Scaled complementary error function e^{x^2} erfc(x) for x >= 0.
double erfcx_positive(double x) {
    if (x <= 5.0) return std::exp(x * x) * std::erfc(x);
    // Asymptotic series 1/(x sqrt(pi)) sum (-1)^n (2n-1)!! / (2x^2)^n;
    // truncated at its smallest term (~e^{-x^2} relative, << 1e-10 here).
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0, s = 1.0;
    for (int n = 1; n <= 40; ++n) {
        term *= -(2.0 * n - 1.0) * inv2x2;
        if (std::abs(term) >= 1.0) break;
        s += term;
        if (std::abs(term) < 1e-17) break;
    }
    return s / (x * std::sqrt(M_PI));
}

}  // namespace

MittagLefflerResult mittag_leffler(double alpha, double z) {
    if (alpha <= 0.0)
        throw std::invalid_argument("mittag_leffler: alpha > 0 required");
    MittagLefflerResult out;
    if (alpha == 1.0) {
        out.value = std::exp(z);
        return out;
    }
    if (alpha == 2.0) {
        out.value = z >= 0.0 ? std::cosh(std::sqrt(z)) : std::cos(std::sqrt(-z));
        return out;
    }
    if (alpha == 0.5) {
        // E_{1/2}(z) = e^{z^2} erfc(-z).
        if (z <= 0.0) {
            out.value = erfcx_positive(-z);
        } else {
            out.value = 2.0 * std::exp(z * z) - erfcx_positive(z);
        }
        return out;
    }
    // Kahan-compensated power series.
    double s = 0.0, comp = 0.0, max_term = 0.0;
    const double logz = z != 0.0 ? std::log(std::abs(z)) : 0.0;
    for (int k = 0; k < 10000; ++k) {
        double term;
        if (k == 0) {
            term = 1.0;
        } else if (z == 0.0) {
            break;
        } else {
            const double logt = k * logz - std::lgamma(alpha * k + 1.0);
            term = std::exp(logt);
            if (z < 0.0 && (k % 2 == 1)) term = -term;
        }
        max_term = std::max(max_term, std::abs(term));
        const double y = term - comp;
        const double tt = s + y;
        comp = (tt - s) - y;
        s = tt;
        if (k > 3 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(s))) break;
    }
    out.value = s;
    out.accuracy_loss = max_term > 1e14 * std::max(1e-300, std::abs(s));
    return out;
}

}  // namespace fracbem
