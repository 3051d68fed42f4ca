#include "lmr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lmr/parallel.hpp"
#include "lmr/random.hpp"
#include "lmr/specfun.hpp"

namespace lmr {

namespace {

constexpr std::uint64_t kBootStream = 0xB0075;

template <class Cdf>
double ks_sorted(const std::vector<double>& x, Cdf F) {
    const double n = double(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = F(x[i]);
        d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
    }
    return d;
}

}  // namespace

double kolmogorov_sf(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    if (lambda < 1.18) {
        // Jacobi theta form, converges fast for small lambda.
        const double pi = std::numbers::pi;
        const double c = -pi * pi / (8.0 * lambda * lambda);
        double s = 0.0;
        for (int k = 1; k <= 7; k += 2) s += std::exp(c * k * k);
        return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
    }
    double s = 0.0, sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double t = std::exp(-2.0 * k * k * lambda * lambda);
        s += sign * t;
        if (t < 1e-18) break;
        sign = -sign;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_one_sample_normal(std::vector<double> values) {
    if (values.size() < 20) throw std::domain_error("ks_one_sample_normal: need at least 20 values");
    std::sort(values.begin(), values.end());
    KsResult r;
    r.statistic = ks_sorted(values, normal_cdf);
    r.p_value = kolmogorov_sf(std::sqrt(double(values.size())) * r.statistic);
    return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::domain_error("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = double(a.size()), nb = double(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    }
    return {d, kolmogorov_sf(std::sqrt(na * nb / (na + nb)) * d)};
}

double nvm_cdf(double v, const std::vector<double>& Z) {
    if (Z.empty()) throw std::domain_error("nvm_cdf: empty Z sample");
    if (v == 0.0) return 0.5;
    double s = 0.0;
    for (double z : Z) s += normal_cdf(v / std::sqrt(z));
    return s / double(Z.size());
}

NvmCdf::NvmCdf(const std::vector<double>& Z, double v_max, std::size_t points)
    : v_max_(v_max), step_(2.0 * v_max / double(points - 1)), tab_(points) {
    if (Z.empty()) throw std::domain_error("NvmCdf: empty Z sample");
    std::vector<double> isd(Z.size());
    for (std::size_t k = 0; k < Z.size(); ++k) isd[k] = 1.0 / std::sqrt(Z[k]);
    // Antisymmetry about v = 0 halves the work.
    const std::size_t mid = points / 2;
    for (std::size_t i = mid; i < points; ++i) {
        const double v = -v_max_ + step_ * double(i);
        double s = 0.0;
        for (double c : isd) s += normal_cdf(v * c);
        tab_[i] = s / double(Z.size());
        tab_[points - 1 - i] = 1.0 - tab_[i];
    }
    if (points % 2) tab_[mid] = 0.5;
}

double NvmCdf::operator()(double v) const {
    if (v <= -v_max_) return 0.0;
    if (v >= v_max_) return 1.0;
    const double x = (v + v_max_) / step_;
    const std::size_t i = std::min(static_cast<std::size_t>(x), tab_.size() - 2);
    const double w = x - double(i);
    return tab_[i] * (1.0 - w) + tab_[i + 1] * w;
}

KsResult ks_against_nvm(std::vector<double> values, const std::vector<double>& Z, std::size_t boot,
                        std::uint64_t seed, int workers) {
    if (values.empty()) throw std::domain_error("ks_against_nvm: empty sample");
    const NvmCdf F(Z);
    std::sort(values.begin(), values.end());
    KsResult r;
    r.statistic = ks_sorted(values, F);
    if (boot == 0) {
        r.p_value = kolmogorov_sf(std::sqrt(double(values.size())) * r.statistic);
        return r;
    }
    std::vector<double> stat(boot);
    const std::size_t n = values.size();
    parallel_for(boot, workers, [&](std::size_t b) {
        Rng rng(derive_seed(seed, b), kBootStream);
        std::vector<double> x(n);
        for (auto& v : x) {
            const auto k = static_cast<std::size_t>(rng.uniform() * double(Z.size()));
            v = std::sqrt(Z[std::min(k, Z.size() - 1)]) * rng.normal();
        }
        std::sort(x.begin(), x.end());
        stat[b] = ks_sorted(x, F);
    });
    std::size_t ge = 0;
    for (double s : stat) ge += s >= r.statistic;
    r.p_value = double(1 + ge) / double(boot + 1);
    return r;
}

Kurtosis excess_kurtosis(const std::vector<double>& v) {
    const double n = double(v.size());
    if (v.size() < 4) throw std::domain_error("excess_kurtosis: need at least 4 values");
    double m = 0.0;
    for (double x : v) m += x;
    m /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double c = (x - m) * (x - m);
        m2 += c;
        m4 += c * c;
    }
    m2 /= n;
    m4 /= n;
    Kurtosis k;
    k.excess = m4 / (m2 * m2) - 3.0;
    k.se = std::sqrt(24.0 * n * (n - 1) * (n - 1) / ((n - 3) * (n - 2) * (n + 3) * (n + 5)));
    return k;
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = 0.0;
    for (double x : v) m += x;
    m /= double(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / double(v.size() - 1);
}

}  // namespace lmr
