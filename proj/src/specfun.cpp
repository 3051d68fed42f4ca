#include "lmr/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lmr {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2k} for k = 1..10.
constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,       -1.0 / 30.0,   1.0 / 42.0,          -1.0 / 30.0,       5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,     -3617.0 / 510.0,     43867.0 / 798.0,   -174611.0 / 330.0};

constexpr double kHalfLog2Pi = 0.91893853320467274178;

double lanczos_log_gamma(double x) {
    x -= 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
    const double t = x + kLanczosG + 0.5;
    return kHalfLog2Pi + (x + 0.5) * std::log(t) - t + std::log(a);
}

// Stirling correction sum_{k} B_{2k} / (2k (2k-1) z^{2k-1}), z >= 10.
double stirling_tail(double z) {
    const double inv = 1.0 / z;
    const double inv2 = inv * inv;
    double term = inv;
    double sum = 0.0;
    for (int k = 1; k <= 6; ++k) {
        sum += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * term;
        term *= inv2;
    }
    return sum;
}

[[noreturn]] void domain(const std::string& what) { throw std::domain_error(what); }

// Euler-Maclaurin for sum_{k>=0} (k + a)^(-s) with n direct terms.
double em_zeta(double s, double a, int n) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += std::pow(a + k, -s);
    const double N = a + n;
    sum += std::pow(N, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(N, -s);
    // B_{2j}/(2j)! * s(s+1)...(s+2j-2) N^{-s-2j+1}
    double rising = s;                  // s (s+1) ... (s+2j-2)
    double fact = 2.0;                  // (2j)!
    double power = std::pow(N, -s - 1.0);
    const double invN2 = 1.0 / (N * N);
    for (int j = 1; j <= 10; ++j) {
        const double term = kBernoulli[j - 1] / fact * rising * power;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        power *= invN2;
    }
    return sum;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) domain("log_gamma: argument must be positive");
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
               lanczos_log_gamma(1.0 - x);
    }
    return lanczos_log_gamma(x);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) domain("beta: arguments must be positive");
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

double log_gamma_ratio(double x, double a, double b) {
    const double z1 = x + a;
    const double z2 = x + b;
    if (!(z1 > 0.0) || !(z2 > 0.0)) domain("log_gamma_ratio: arguments must be positive");
    if (std::min(z1, z2) < 10.0) return log_gamma(z1) - log_gamma(z2);
    const double delta = a - b;
    return (z1 - 0.5) * std::log1p(delta / z2) + delta * std::log(z2) - delta +
           stirling_tail(z1) - stirling_tail(z2);
}

double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0)) domain("hurwitz_zeta: s must exceed 1");
    if (!(a > 0.0)) domain("hurwitz_zeta: a must be positive");
    // Adaptive direct-term count: the remainder terms are controlled once
    // a + n is large compared to the order of the Bernoulli correction.
    const int n = a >= 16.0 ? 0 : static_cast<int>(std::ceil(16.0 - a));
    return em_zeta(s, a, n);
}

double zeta(double s) {
    if (!(s > 1.0)) domain("zeta: s must exceed 1");
    return em_zeta(s, 1.0, 15);
}

double inverse_stable_moment(double a, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) domain("inverse_stable_moment: alpha must lie in (0,1)");
    if (!(a > 0.0)) domain("inverse_stable_moment: a must be positive");
    return std::exp(log_gamma(a / alpha) - log_gamma(a)) / alpha;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * (std::numbers::sqrt2 / 2.0)); }
double normal_sf(double x) { return 0.5 * std::erfc(x * (std::numbers::sqrt2 / 2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) domain("normal_quantile: p must lie in (0,1)");
    // Acklam's rational approximation followed by one Halley step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = p < 0.5 ? normal_cdf(x) - p : (1.0 - p) - normal_sf(x);
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

void ModelConstants::validate() const {
    auto fail = [](const char* field, double v, const char* range) {
        std::ostringstream os;
        os << field << " = " << v << " outside " << range;
        throw std::domain_error(os.str());
    };
    if (!(d > 0.0 && d < 0.5)) fail("d", d, "(0, 0.5)");
    if (!(alpha > 0.0 && alpha <= 1.0)) fail("alpha", alpha, "(0, 1]");
    if (!(sigma_eps2 > 0.0)) fail("sigma_eps2", sigma_eps2, "(0, inf)");
    if (!(C_d > 0.0)) fail("C_d", C_d, "(0, inf)");
}

double tilde_C_d(const ModelConstants& c) {
    c.validate();
    return c.sigma_eps2 * c.C_d * c.C_d * std::exp(log_beta(c.d, 1.0 - 2.0 * c.d));
}

double nvm_constant(double alpha, double d) {
    if (!(d > 0.0 && d < 0.5)) domain("nvm_constant: d must lie in (0, 1/2)");
    const double r = 1.0 - 2.0 * d;
    if (!(alpha > r && alpha <= 1.0)) {
        std::ostringstream os;
        os << "nvm_constant: alpha = " << alpha << " must lie in (1-2d, 1] = (" << r << ", 1]";
        domain(os.str());
    }
    return (alpha - r) * (2.0 * alpha - r) / (2.0 * alpha) *
           std::exp(log_gamma(r) - log_gamma(r / alpha));
}

double memory_param_Y(double alpha, double d) { return (2.0 * d + alpha - 1.0) / (2.0 * alpha); }

}  // namespace lmr
