#pragma once

// Goodness-of-fit tools: Kolmogorov-Smirnov tests against the normal law and
// against normal variance mixtures sqrt(Z) N.

#include <cstdint>
#include <vector>

namespace lmr {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_sf(double lambda);

/// Requires at least 20 values.
KsResult ks_one_sample_normal(std::vector<double> values);

/// Asymptotic p-value with lambda = sqrt(nm / (n + m)) D.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// E[Phi(v / sqrt(Z))] over the Z sample.
double nvm_cdf(double v, const std::vector<double>& Z);

/// nvm_cdf tabulated on a uniform grid and interpolated linearly.
class NvmCdf {
public:
    explicit NvmCdf(const std::vector<double>& Z, double v_max = 12.0, std::size_t points = 4801);
    double operator()(double v) const;

private:
    double v_max_, step_;
    std::vector<double> tab_;
};

/// KS distance of the sample to nvm_cdf; p-value by parametric bootstrap
/// with samples sqrt(Z*) N, Z* resampled from Z.
KsResult ks_against_nvm(std::vector<double> values, const std::vector<double>& Z, std::size_t boot = 500,
                        std::uint64_t seed = 0, int workers = 1);

struct Kurtosis {
    double excess = 0.0;
    double se = 0.0;  // sqrt(24 n (n-1)^2 / ((n-3)(n-2)(n+3)(n+5)))
};

Kurtosis excess_kurtosis(const std::vector<double>& v);

/// Sample variance with n - 1 in the denominator.
double sample_variance(const std::vector<double>& v);

}  // namespace lmr
