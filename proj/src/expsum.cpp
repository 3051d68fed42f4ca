#include "lmr/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lmr/specfun.hpp"

namespace lmr {

double ExpSum::operator()(double x) const {
    double s = m0 - m1 * x + 0.5 * m2 * x * x;
    for (std::size_t q = 0; q < rate.size(); ++q) s += weight[q] * std::exp(-rate[q] * x);
    return s;
}

ExpSum fit_expsum(const Mixing& mix, const ExpSumOptions& opt) {
    if (!(opt.x_min > 0.0) || !(opt.x_max >= opt.x_min)) throw std::domain_error("fit_expsum: bad range");
    if (!(mix.p > 0.0)) throw std::domain_error("fit_expsum: p must be positive");
    const double ltol = std::log(1.0 / opt.tol);
    const double h = std::numbers::pi * std::numbers::pi / (ltol + 2.0 + 2.0 * std::max(0.0, mix.p - 0.5));
    const double u_hi = std::log((ltol + 12.0) / opt.x_min);
    const double u_lo = -std::log(opt.x_max) - (ltol + 45.0) / std::min(mix.p, 1.0) - 5.0;
    const long k_hi = static_cast<long>(std::ceil(u_hi / h));
    const long k_lo = static_cast<long>(std::floor(u_lo / h));

    std::vector<double> u, lw;
    u.reserve(k_hi - k_lo + 1);
    lw.reserve(k_hi - k_lo + 1);
    for (long k = k_lo; k <= k_hi; ++k) {
        const double uk = k * h;
        u.push_back(uk);
        lw.push_back(std::log(h) + uk + mix.log_phi_u(uk));
    }
    const std::size_t N = u.size();

    // Reference value at x_max from the untruncated trapezoid.
    double k_at_max = 0.0;
    for (std::size_t i = 0; i < N; ++i) k_at_max += std::exp(lw[i] - std::exp(u[i]) * opt.x_max);
    const double budget = opt.tol * k_at_max;

    // Cut from below: accumulate the error of dropping (or folding) the
    // smallest-rate nodes until it would exceed the budget.
    std::size_t cut = 0;
    double m0 = 0, m1 = 0, m2 = 0, err = 0;
    const double x3 = opt.x_max * opt.x_max * opt.x_max;
    for (std::size_t i = 0; i < N; ++i) {
        const double w = std::exp(lw[i]);
        const double s = std::exp(u[i]);
        const double add = opt.poly_tail ? w * s * s * s * x3 / 6.0 : w;
        if (err + add > budget) break;
        err += add;
        m0 += w;
        m1 += w * s;
        m2 += w * s * s;
        cut = i + 1;
    }

    ExpSum out;
    if (opt.poly_tail) {
        out.m0 = m0;
        out.m1 = m1;
        out.m2 = m2;
    }
    for (std::size_t i = cut; i < N; ++i) {
        const double w = std::exp(lw[i]);
        if (w == 0.0) continue;
        out.rate.push_back(std::exp(u[i]));
        out.weight.push_back(w);
    }
    return out;
}

ExpSum power_kernel(double r, const ExpSumOptions& opt) {
    if (!(r > 0.0)) throw std::domain_error("power_kernel: r must be positive");
    const double lg = log_gamma(r);
    return fit_expsum({[r, lg](double u) { return (r - 1.0) * u - lg; }, r}, opt);
}

ExpSum farima_acov_kernel(double d, double sigma2, const ExpSumOptions& opt) {
    if (!(d > 0.0 && d < 0.5)) throw std::domain_error("farima_acov_kernel: d must lie in (0, 1/2)");
    const double lc = std::log(sigma2 * std::sin(std::numbers::pi * d) / std::numbers::pi);
    return fit_expsum({[d, lc](double u) {
                           const double s = std::exp(u);
                           return lc - s * d - 2.0 * d * std::log(-std::expm1(-s));
                       },
                       1.0 - 2.0 * d},
                      opt);
}

ExpSum farima_coef_kernel(double d, const ExpSumOptions& opt) {
    if (!(d > 0.0 && d < 0.5)) throw std::domain_error("farima_coef_kernel: d must lie in (0, 1/2)");
    const double lc = std::log(std::sin(std::numbers::pi * d) / std::numbers::pi);
    return fit_expsum({[d, lc](double u) {
                           const double s = std::exp(u);
                           return lc - s * d - d * std::log(-std::expm1(-s));
                       },
                       1.0 - d},
                      opt);
}

ExpSum powerlaw_coef_kernel(double d, double C, const ExpSumOptions& opt) {
    if (!(d > 0.0 && d < 0.5)) throw std::domain_error("powerlaw_coef_kernel: d must lie in (0, 1/2)");
    const double lc = std::log(C) - log_gamma(1.0 - d);
    return fit_expsum({[d, lc](double u) { return lc - d * u; }, 1.0 - d}, opt);
}

std::vector<double> laplace_sums(const ExpSum& K, const double* x, std::size_t n) {
    std::vector<double> F(K.rate.size(), 0.0);
    for (std::size_t q = 0; q < K.rate.size(); ++q) {
        const double s = K.rate[q];
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += std::exp(-s * x[k]);
        F[q] = acc;
    }
    return F;
}

double pair_sum(const double* L, std::size_t n, const ExpSum& K, int min_gap) {
    if (n < 2) return pair_sum_gaps(nullptr, n, K, min_gap);
    std::vector<double> gaps(n - 1);
    for (std::size_t j = 1; j < n; ++j) gaps[j - 1] = L[j] - L[j - 1];
    return pair_sum_gaps(gaps.data(), n, K, min_gap);
}

double pair_sum_gaps(const double* gaps, std::size_t n, const ExpSum& K, int min_gap) {
    if (min_gap != 1 && min_gap != 2) throw std::invalid_argument("pair_sum: min_gap must be 1 or 2");
    if (n <= static_cast<std::size_t>(min_gap)) return 0.0;
    const std::size_t Q = K.size();
    const double* s = K.rate.data();
    std::vector<double> P1(Q, 1.0), P2(Q, 0.0), e(Q), eprev(Q, 1.0), acc(Q, 0.0);
    // P1 = P_{j-1}, P2 = P_{j-2}; P_j = sum_{i<=j} exp(-s (L_j - L_i)).
    for (std::size_t j = 1; j < n; ++j) {
        const double dl = gaps[j - 1];
        double* __restrict ep = e.data();
        for (std::size_t q = 0; q < Q; ++q) ep[q] = std::exp(-s[q] * dl);
        if (min_gap == 1) {
            for (std::size_t q = 0; q < Q; ++q) {
                const double t = ep[q] * P1[q];
                acc[q] += t;
                P1[q] = t + 1.0;
            }
        } else {
            for (std::size_t q = 0; q < Q; ++q) {
                acc[q] += ep[q] * eprev[q] * P2[q];
                P2[q] = P1[q];
                P1[q] = ep[q] * P1[q] + 1.0;
                eprev[q] = ep[q];
            }
        }
    }
    double total = 0.0;
    for (std::size_t q = 0; q < Q; ++q) total += K.weight[q] * acc[q];

    if (K.m0 != 0.0 || K.m1 != 0.0 || K.m2 != 0.0) {
        // Polynomial part: sum over pairs of m0 - m1 x + m2 x^2 / 2 using
        // prefix sums of L and L^2, shifted by L[0] to limit cancellation.
        const std::size_t g = static_cast<std::size_t>(min_gap);
        double cnt = 0, s1 = 0, s2 = 0;
        double pre1 = 0, pre2 = 0;  // sums over i <= j - g
        std::vector<double> lev(n);
        lev[0] = 0.0;
        for (std::size_t j = 1; j < n; ++j) lev[j] = lev[j - 1] + gaps[j - 1];
        for (std::size_t j = g; j < n; ++j) {
            const double li = lev[j - g];
            pre1 += li;
            pre2 += li * li;
            const double m = static_cast<double>(j - g + 1);
            const double lj = lev[j];
            cnt += m;
            s1 += m * lj - pre1;
            s2 += m * lj * lj - 2.0 * lj * pre1 + pre2;
        }
        total += K.m0 * cnt - K.m1 * s1 + 0.5 * K.m2 * s2;
    }
    return total;
}

double pair_sum_direct(const double* L, std::size_t n, const std::function<double(double)>& k,
                       int min_gap) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i + static_cast<std::size_t>(min_gap) <= j; ++i) total += k(L[j] - L[i]);
    return total;
}

}  // namespace lmr
