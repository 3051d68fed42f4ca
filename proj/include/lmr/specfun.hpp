#pragma once

// Special functions and the closed-form constants of the sampled long-memory
// model. Everything here is a pure function of its arguments.

namespace lmr {

/// Natural log of Gamma(x) for x > 0 (Lanczos, g = 7, nine terms).
double log_gamma(double x);

/// Gamma(x) for x > 0, evaluated as exp(log_gamma(x)).
double gamma_fn(double x);

double log_beta(double a, double b);
double beta_fn(double a, double b);

/// lnGamma(x + a) - lnGamma(x + b), accurate when x is huge and a - b is O(1),
/// where the naive difference cancels catastrophically.
double log_gamma_ratio(double x, double a, double b);

/// Riemann zeta for s > 1 by Euler-Maclaurin with an adaptive number of
/// direct terms.
double zeta(double s);

/// Hurwitz zeta sum_{k>=0} (k + a)^(-s) for s > 1, a > 0.
double hurwitz_zeta(double s, double a);

/// E(L_1^{-a}) = Gamma(a/alpha) / (alpha Gamma(a)) for the standard one-sided
/// stable law with Laplace transform exp(-s^alpha), 0 < alpha < 1.
double inverse_stable_moment(double a, double alpha);

double normal_cdf(double x);
double normal_sf(double x);
double normal_quantile(double p);

struct ModelConstants {
    double d = 0.25;
    double alpha = 0.5;
    double sigma_eps2 = 1.0;
    double C_d = 1.0;

    /// Throws std::domain_error naming the offending field.
    void validate() const;
    double r() const { return 1.0 - 2.0 * d; }
};

/// sigma_eps^2 C_d^2 B(d, 1 - 2d): the leading constant of the autocovariance.
double tilde_C_d(const ModelConstants& c);

/// Normalizing constant of the randomized variance Z(alpha, d); requires
/// 1 - 2d < alpha <= 1.
double nvm_constant(double alpha, double d);

/// Memory parameter of the sampled process, (2d + alpha - 1) / (2 alpha).
double memory_param_Y(double alpha, double d);

}  // namespace lmr
