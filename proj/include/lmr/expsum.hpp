#pragma once

// Sums of exponentials for completely monotone kernels
//   K(x) = int_0^inf exp(-s x) phi(s) ds,
// discretized by the trapezoid rule in u = ln s. Nodes with very small rates
// can be folded into a quadratic polynomial m0 - m1 x + m2 x^2 / 2.

#include <cstddef>
#include <functional>
#include <vector>

namespace lmr {

struct ExpSum {
    std::vector<double> rate;
    std::vector<double> weight;
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;

    std::size_t size() const { return rate.size(); }
    double operator()(double x) const;
};

struct ExpSumOptions {
    double x_min = 1.0;
    double x_max = 1e6;
    double tol = 1e-10;
    bool poly_tail = true;
};

/// log phi(s) as a function of u = ln s, plus the exponent p of the small-s
/// behaviour phi(s) ~ c s^(p-1), p > 0.
struct Mixing {
    std::function<double(double)> log_phi_u;
    double p;
};

ExpSum fit_expsum(const Mixing& mix, const ExpSumOptions& opt);

/// x^(-r), 0 < r.
ExpSum power_kernel(double r, const ExpSumOptions& opt);

/// sigma^2 Gamma(1-2d) Gamma(h+d) / (Gamma(d) Gamma(1-d) Gamma(h+1-d)), h > 0.
ExpSum farima_acov_kernel(double d, double sigma2, const ExpSumOptions& opt);

/// Gamma(i+d) / (Gamma(d) Gamma(i+1)), the FARIMA(0,d,0) MA coefficients.
ExpSum farima_coef_kernel(double d, const ExpSumOptions& opt);

/// C i^(d-1).
ExpSum powerlaw_coef_kernel(double d, double C, const ExpSumOptions& opt);

/// sum over i < j, j - i >= min_gap (1 or 2), of K(L[j] - L[i]) for a
/// nondecreasing sequence L. Cost O(n * K.size()).
double pair_sum(const double* L, std::size_t n, const ExpSum& K, int min_gap);

/// F[q] = sum_k exp(-rate[q] * x[k]) for every node of K.
std::vector<double> laplace_sums(const ExpSum& K, const double* x, std::size_t n);

/// Same sum given the n - 1 consecutive gaps L[j] - L[j-1] directly, which
/// keeps tiny gaps exact when the levels themselves are large.
double pair_sum_gaps(const double* gaps, std::size_t n, const ExpSum& K, int min_gap);

/// Brute-force reference for pair_sum.
double pair_sum_direct(const double* L, std::size_t n, const std::function<double(double)>& k,
                       int min_gap);

}  // namespace lmr
