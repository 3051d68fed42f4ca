#include "lmr/limits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lmr/errors.hpp"
#include "lmr/expsum.hpp"
#include "lmr/fft.hpp"
#include "lmr/parallel.hpp"
#include "lmr/random.hpp"
#include "lmr/specfun.hpp"

namespace lmr {

namespace {

constexpr std::uint64_t kPurposeT = 0x7A;
constexpr std::uint64_t kPurposeX = 0x58;
constexpr std::uint64_t kPurposeVar = 0x5A5;
constexpr std::uint64_t kPurposeMix = 0x313;
constexpr std::uint64_t kPurposeProbe = 0x9B;
constexpr std::uint64_t kPurposeHarm = 0x4A;
constexpr std::uint64_t kHarmStream = 0x4A4D;

[[noreturn]] void domain(const std::string& what) { throw std::domain_error(what); }

std::int64_t as_int(double t) { return static_cast<std::int64_t>(t); }

Estimate fold(const std::vector<double>& v, std::size_t stride, std::size_t col) {
    const std::size_t n = v.size() / stride;
    double m = 0.0;
    for (std::size_t p = 0; p < n; ++p) m += v[p * stride + col];
    m /= double(n);
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const double c = v[p * stride + col] - m;
        s += c * c;
    }
    return {m, n > 1 ? std::sqrt(s / double(n - 1) / double(n)) : 0.0};
}

// exact_acov(0) + the rest, evaluated at integer lags.
double cond_var_impl(const RenewalPath& p, const LinearProcessSpec& spec, const AcovTable& g) {
    const std::size_t n = p.T.size();
    const double g0 = g.at0();
    if (n == 1) return g0;
    const double span = p.T.back() - p.T.front();
    if (spec.family == CoefFamily::FARIMA0d0) {
        const ExpSum K = farima_acov_kernel(spec.d, spec.sigma_eps2, {1.0, std::max(span, 2.0), 1e-11, true});
        return double(n) * g0 + 2.0 * pair_sum_gaps(p.gaps.data() + 1, n, K, 1);
    }
    if (span < double(std::uint64_t(1) << 22)) return toeplitz_sum_fft(p, spec);
    double s = 0.0;
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = 0; j < k; ++j) s += g(p.T[k] - p.T[j]);
    return double(n) * g0 + 2.0 * s;
}

std::vector<double> indicator(const RenewalPath& p, std::int64_t origin, std::size_t L) {
    std::vector<double> I(L, 0.0);
    for (double t : p.T) I[static_cast<std::size_t>(as_int(t) - origin)] = 1.0;
    return I;
}

double toeplitz_from_indicator(const std::vector<double>& I, std::size_t n, const AcovTable& g) {
    const auto cnt = fft_correlate(I.data(), I.size(), I.data(), I.size());
    double s = 0.0;
    for (std::size_t h = cnt.size(); h-- > 1;) {
        const double c = std::round(cnt[h]);
        if (c > 0.0) s += c * g(double(h));
    }
    return double(n) * g.at0() + 2.0 * s;
}

void check_integer_times(const RenewalPath& p) {
    if (p.T.empty()) domain("renewal path is empty");
    if (p.gaps.size() != p.T.size()) domain("renewal path needs one gap per time");
    for (std::size_t k = 0; k < p.T.size(); ++k) {
        const double t = p.T[k];
        if (t != std::floor(t) || t > 9.0e15) domain("renewal times must be integers below 2^53");
        if (!(t >= 1.0) || (k > 0 && !(t > p.T[k - 1]))) domain("renewal times must be positive and increasing");
    }
}

CoefficientProfile profile_impl(const RenewalPath& path, const LinearProcessSpec& spec, const AcovTable& g,
                                std::uint64_t past, std::uint64_t cap, bool check_identity) {
    check_integer_times(path);
    const std::int64_t T1 = as_int(path.T.front()), Tn = as_int(path.T.back());
    if (past == 0) past = static_cast<std::uint64_t>(std::max<std::int64_t>(Tn, 1));
    CoefficientProfile pr;
    pr.j_min = T1 - static_cast<std::int64_t>(past);
    const std::uint64_t L = static_cast<std::uint64_t>(Tn - pr.j_min + 1);
    if (L > cap) {
        std::ostringstream os;
        os << "coefficient_profile: window of " << L << " coefficients exceeds the cap " << cap;
        throw ResourceError(os.str(), L, cap);
    }
    const auto a = coefficients(spec, L);
    const auto I = indicator(path, pr.j_min, L);
    pr.d = fft_correlate(a.data(), L, I.data(), L);

    double mx = 0.0;
    std::size_t arg = 0;
    for (std::size_t u = 0; u < L; ++u) {
        const double v = pr.d[u] * pr.d[u];
        pr.window_sum_sq += v;
        if (v > mx) {
            mx = v;
            arg = u;
        }
    }
    pr.argmax_j = pr.j_min + static_cast<std::int64_t>(arg);

    // Past beyond the window: d_{j_min - m} = sum_q w_q F_q e^{-s_q m}, m >= 1.
    const double x_min = double(past) + 1.0;
    const ExpSumOptions opt{x_min, 1e30, 1e-12, false};
    const ExpSum K = spec.family == CoefFamily::FARIMA0d0 ? farima_coef_kernel(spec.d, opt)
                                                          : powerlaw_coef_kernel(spec.d, spec.coef_scale(), opt);
    std::vector<double> x(path.T.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = path.T[k] - double(pr.j_min);
    const auto F = laplace_sums(K, x.data(), x.size());
    std::vector<double> c(K.size());
    for (std::size_t q = 0; q < K.size(); ++q) c[q] = K.weight[q] * F[q];
    double tail = 0.0;
    for (std::size_t q = 0; q < K.size(); ++q) {
        double row = 0.0;
        for (std::size_t q2 = 0; q2 < K.size(); ++q2) row += c[q2] / std::expm1(K.rate[q] + K.rate[q2]);
        tail += c[q] * row;
    }
    pr.tail_sum_sq = tail;
    pr.d2 = pr.window_sum_sq + tail;
    pr.lindeberg_ratio = mx / pr.d2;
    if (check_identity) {
        pr.toeplitz = toeplitz_from_indicator(I, path.T.size(), g);
        pr.identity_rel_error = std::abs(spec.sigma_eps2 * pr.d2 - pr.toeplitz) / pr.toeplitz;
    }
    return pr;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

Estimate mean_se(const std::vector<double>& v) {
    if (v.empty()) return {};
    return fold(v, 1, 0);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
    return derive_seed(derive_seed(seed, purpose), index);
}

std::string to_string(Regime r) { return r == Regime::Normal ? "Normal" : "NVM"; }

std::string to_string(RegimeReason r) {
    switch (r) {
        case RegimeReason::FiniteMean: return "finite-mean";
        case RegimeReason::AlphaAtMostR: return "alpha<=1-2d";
        case RegimeReason::AlphaOne: return "alpha=1";
        case RegimeReason::Intermediate: return "1-2d<alpha<1";
    }
    return "?";
}

RegimeLabel classify_regime(std::optional<double> alpha, double d) {
    if (!(d > 0.0 && d < 0.5)) {
        std::ostringstream os;
        os << "d = " << d << " outside (0, 0.5)";
        domain(os.str());
    }
    if (!alpha) return {Regime::Normal, RegimeReason::FiniteMean};
    const double a = *alpha;
    if (!(a > 0.0 && a <= 1.0)) {
        std::ostringstream os;
        os << "alpha = " << a << " outside (0, 1]";
        domain(os.str());
    }
    if (a == 1.0) return {Regime::Normal, RegimeReason::AlphaOne};
    // Boundary alpha = 1 - 2d belongs to the normal case.
    if (a <= 1.0 - 2.0 * d + 1e-12) return {Regime::Normal, RegimeReason::AlphaAtMostR};
    return {Regime::NVM, RegimeReason::Intermediate};
}

RegimeLabel classify_regime(const RenewalLaw& law, double d) {
    return classify_regime(law.finite_mean() ? std::nullopt : std::optional<double>(law.alpha()), d);
}

SampledSeries sample_Y(const LinearProcessSpec& spec, const RenewalLaw& law, std::size_t n, std::uint64_t seed,
                       std::uint64_t time_cap, std::size_t max_redraws) {
    spec.validate();
    if (n == 0) domain("sample_Y: n must be at least 1");
    SampledSeries out;
    for (std::size_t attempt = 0;; ++attempt) {
        out.path = sample_path(law, n, stream_seed(seed, kPurposeT, attempt), true);
        if (out.path.T.back() <= double(time_cap)) break;
        if (attempt + 1 >= max_redraws) {
            const auto Tn = static_cast<std::uint64_t>(std::min(out.path.T.back(), 1.8e19));
            std::ostringstream os;
            os << "sample_Y: T_n = " << out.path.T.back() << " exceeds the cap " << time_cap << " after "
               << max_redraws << " draws";
            throw ResourceError(os.str(), Tn, time_cap);
        }
        ++out.rejections;
    }
    out.truncation = spec.truncation ? spec.truncation : 4 * std::uint64_t(n);
    out.x_seed = stream_seed(seed, kPurposeX, 0);
    std::vector<std::int64_t> times(n);
    for (std::size_t k = 0; k < n; ++k) times[k] = as_int(out.path.T[k]);
    out.Y = generate_at(spec, times, out.truncation, out.x_seed);
    return out;
}

SigmaYTable sigma_Y_mc(const RenewalLaw& law, const LinearProcessSpec& spec, const std::vector<std::size_t>& lags,
                       std::size_t reps, std::uint64_t seed, int workers) {
    spec.validate();
    if (lags.empty() || reps == 0) domain("sigma_Y_mc: need at least one lag and one replicate");
    const std::size_t H = *std::max_element(lags.begin(), lags.end());
    const AcovTable g(spec);
    const std::size_t L = lags.size();
    std::vector<double> vals(reps * L);
    parallel_for(reps, workers, [&](std::size_t p) {
        RenewalPath path;
        if (H > 0) path = sample_path(law, H, stream_seed(seed, kPurposeT, p), true);
        for (std::size_t i = 0; i < L; ++i) vals[p * L + i] = lags[i] == 0 ? g.at0() : g(path.T[lags[i] - 1]);
    });
    SigmaYTable t;
    t.lags = lags;
    t.reps = reps;
    for (std::size_t i = 0; i < L; ++i) t.sigma.push_back(fold(vals, L, i));
    return t;
}

Estimate sigma_Y_mc(const RenewalLaw& law, const LinearProcessSpec& spec, std::size_t h, std::size_t reps,
                    std::uint64_t seed, int workers) {
    return sigma_Y_mc(law, spec, std::vector<std::size_t>{h}, reps, seed, workers).sigma[0];
}

double sigma_Y_asymptotic(const RenewalLaw& law, const LinearProcessSpec& spec, double h, double kappa) {
    spec.validate();
    if (law.finite_mean()) domain("sigma_Y_asymptotic: gap law " + law.name() + " has a finite mean");
    if (!(h >= 1.0)) domain("sigma_Y_asymptotic: h must be at least 1");
    if (!(kappa > 0.0)) domain("sigma_Y_asymptotic: kappa must be positive");
    const double alpha = law.alpha();
    const double Ct = tilde_C_d(spec.constants(alpha));
    const double r = 1.0 - 2.0 * spec.d;
    const double b = law.quantile_b(h);
    if (alpha < 1.0) return Ct * inverse_stable_moment(r, alpha) * std::pow(kappa, -r / alpha) * std::pow(b, -r);
    return Ct * std::pow(b * law.ell_star(b) / law.ell(b), -r);
}

double variance_sum_Y(const std::vector<double>& sigma, std::size_t n) {
    if (n == 0) domain("variance_sum_Y: n must be at least 1");
    if (sigma.size() < n) domain("variance_sum_Y: table must cover lags 0..n-1");
    double s = 0.0;
    for (std::size_t h = n - 1; h >= 1; --h) s += double(n - h) * sigma[h];
    return double(n) * sigma[0] + 2.0 * s;
}

Estimate variance_sum_Y(const RenewalLaw& law, const LinearProcessSpec& spec, std::size_t n, std::size_t reps,
                        std::uint64_t seed, int workers) {
    spec.validate();
    if (n == 0 || reps == 0) domain("variance_sum_Y: need n >= 1 and reps >= 1");
    const AcovTable g(spec);
    std::vector<double> V(reps);
    parallel_for(reps, workers, [&](std::size_t p) {
        double s = 0.0;
        if (n > 1) {
            const auto path = sample_path(law, n - 1, stream_seed(seed, kPurposeT, p), true);
            for (std::size_t h = n - 1; h >= 1; --h) s += double(n - h) * g(path.T[h - 1]);
        }
        V[p] = double(n) * g.at0() + 2.0 * s;
    });
    return mean_se(V);
}

double conditional_variance(const RenewalPath& path, const LinearProcessSpec& spec) {
    spec.validate();
    check_integer_times(path);
    const AcovTable g(spec);
    return cond_var_impl(path, spec, g);
}

double toeplitz_sum_fft(const RenewalPath& path, const LinearProcessSpec& spec) {
    spec.validate();
    check_integer_times(path);
    const std::int64_t T1 = as_int(path.T.front());
    const std::uint64_t L = static_cast<std::uint64_t>(as_int(path.T.back()) - T1 + 1);
    if (L > kDefaultWindowCap) {
        std::ostringstream os;
        os << "toeplitz_sum_fft: span " << L << " exceeds the cap " << kDefaultWindowCap;
        throw ResourceError(os.str(), L, kDefaultWindowCap);
    }
    const AcovTable g(spec);
    return toeplitz_from_indicator(indicator(path, T1, L), path.T.size(), g);
}

CoefficientProfile coefficient_profile(const RenewalPath& path, const LinearProcessSpec& spec, std::uint64_t past,
                                       std::uint64_t window_cap, bool check_identity) {
    spec.validate();
    const AcovTable g(spec, check_identity ? (1u << 16) : 1u);
    return profile_impl(path, spec, g, past, window_cap, check_identity);
}

std::string to_string(SnRoute r) {
    switch (r) {
        case SnRoute::Auto: return "auto";
        case SnRoute::Linear: return "linear";
        case SnRoute::ConditionalGaussian: return "conditional-gaussian";
    }
    return "?";
}

SnRoute sn_route_from_string(const std::string& s) {
    if (s == "auto") return SnRoute::Auto;
    if (s == "linear") return SnRoute::Linear;
    if (s == "conditional-gaussian") return SnRoute::ConditionalGaussian;
    domain("unknown route '" + s + "' (expected auto, linear or conditional-gaussian)");
}

SnBatch S_n_statistic(const LinearProcessSpec& spec, const RenewalLaw& law, std::size_t n, std::size_t reps,
                      std::uint64_t seed, const SnOptions& opt) {
    spec.validate();
    if (n == 0 || reps == 0) domain("S_n_statistic: need n >= 1 and reps >= 1");
    SnBatch out;
    out.route = opt.route;
    if (out.route == SnRoute::Auto)
        out.route = law.finite_mean() || spec.innovation != InnovationLaw::Gaussian ? SnRoute::Linear
                                                                                    : SnRoute::ConditionalGaussian;
    if (out.route == SnRoute::ConditionalGaussian && spec.innovation != InnovationLaw::Gaussian)
        domain("S_n_statistic: the conditional-Gaussian route needs Gaussian innovations");

    out.variance = variance_sum_Y(law, spec, n, opt.var_reps, stream_seed(seed, kPurposeVar, 0), opt.workers);
    const double var = out.variance.value;
    const AcovTable g(spec);
    out.reps.resize(reps);
    parallel_for(reps, opt.workers, [&](std::size_t p) {
        SnReplicate& r = out.reps[p];
        r.seed = stream_seed(seed, kPurposeT, p);
        const auto path = sample_path(law, n, r.seed, true);
        r.T_n = path.T.back();
        Rng mix(stream_seed(seed, kPurposeMix, p), 0);
        const double N = mix.normal();
        if (out.route == SnRoute::Linear) {
            auto pr = profile_impl(path, spec, g, 0, opt.window_cap, true);
            std::vector<double> eps(pr.d.size());
            innovations(spec, stream_seed(seed, kPurposeX, p), pr.j_min, eps.size(), eps.data());
            const double sum = dot(pr.d, eps) + std::sqrt(spec.sigma_eps2 * pr.tail_sum_sq) * N;
            r.V_cond = spec.sigma_eps2 * pr.d2;
            r.S = sum / std::sqrt(var);
            r.identity_rel_error = pr.identity_rel_error;
            r.lindeberg_ratio = pr.lindeberg_ratio;
        } else {
            r.V_cond = cond_var_impl(path, spec, g);
            r.S = std::sqrt(r.V_cond / var) * N;
        }
        r.R = r.V_cond / var;
    });
    return out;
}

double R_n_ratio(const RenewalPath& path, const LinearProcessSpec& spec, double unconditional_variance) {
    if (!(unconditional_variance > 0.0)) domain("R_n_ratio: unconditional variance must be positive");
    return conditional_variance(path, spec) / unconditional_variance;
}

ConditionalBatch conditional_S_prime(const RenewalPath& path, const LinearProcessSpec& spec, std::size_t reps,
                                     std::uint64_t seed, int workers, std::uint64_t window_cap) {
    spec.validate();
    ConditionalBatch out;
    out.profile = coefficient_profile(path, spec, 0, window_cap, true);
    const auto& pr = out.profile;
    const double scale = 1.0 / std::sqrt(spec.sigma_eps2 * pr.d2);
    const double tail_sd = std::sqrt(spec.sigma_eps2 * pr.tail_sum_sq);
    out.S.resize(reps);
    parallel_for(reps, workers, [&](std::size_t p) {
        std::vector<double> eps(pr.d.size());
        innovations(spec, stream_seed(seed, kPurposeX, p), pr.j_min, eps.size(), eps.data());
        Rng mix(stream_seed(seed, kPurposeMix, p), 0);
        out.S[p] = (dot(pr.d, eps) + tail_sd * mix.normal()) * scale;
    });
    out.profile.d.clear();
    out.profile.d.shrink_to_fit();
    return out;
}

PositivityWindow positivity_window(const std::vector<double>& sigma) {
    PositivityWindow w;
    if (sigma.empty()) return w;
    w.positive_from = sigma.size();
    while (w.positive_from > 0 && sigma[w.positive_from - 1] > 0.0) --w.positive_from;
    double s = sigma[0];
    for (std::size_t m = 1; m < sigma.size(); ++m) {
        s += 2.0 * sigma[m];
        if (s > 0.0) {
            w.found = true;
            w.m = m;
            break;
        }
    }
    return w;
}

std::string to_string(UiProbe p) {
    switch (p) {
        case UiProbe::MaxGap: return "max-gap";
        case UiProbe::DoubleAverage: return "double-average";
        case UiProbe::AlphaOneSum: return "alpha-one-sum";
        case UiProbe::AlphaOneDoubleAverage: return "alpha-one-double-average";
    }
    return "?";
}

UiProbe ui_probe_from_string(const std::string& s) {
    for (auto p : {UiProbe::MaxGap, UiProbe::DoubleAverage, UiProbe::AlphaOneSum, UiProbe::AlphaOneDoubleAverage})
        if (to_string(p) == s) return p;
    domain("unknown probe '" + s + "'");
}

UiProbeResult ui_probe(const RenewalLaw& law, UiProbe probe, double r, const std::vector<std::size_t>& ns,
                       std::size_t reps, std::uint64_t seed, int workers) {
    if (law.finite_mean()) domain("ui_probe: needs an infinite-mean gap law");
    if (ns.empty() || reps == 0) domain("ui_probe: need at least one n and one replicate");
    const double alpha = law.alpha();
    if (!(r > 0.0)) domain("ui_probe: r must be positive");
    const bool one = probe == UiProbe::AlphaOneSum || probe == UiProbe::AlphaOneDoubleAverage;
    if (one && alpha != 1.0) domain("ui_probe: probes (iii) and (iv) need alpha = 1");
    if (probe == UiProbe::DoubleAverage && !(r < alpha)) domain("ui_probe: probe (ii) needs 0 < r < alpha");
    if (probe == UiProbe::AlphaOneDoubleAverage && !(r < 1.0)) domain("ui_probe: probe (iv) needs 0 < r < 1");

    const std::size_t N = *std::max_element(ns.begin(), ns.end());
    const std::size_t K = ns.size();
    std::vector<double> scale(K);  // divisor b_n, times ell*(b_n)/ell(b_n) at alpha = 1
    for (std::size_t i = 0; i < K; ++i) {
        if (ns[i] == 0) domain("ui_probe: n must be at least 1");
        const double b = law.quantile_b(double(ns[i]));
        scale[i] = one ? b * law.ell_star(b) / law.ell(b) : b;
    }
    std::vector<double> vals(reps * K);
    parallel_for(reps, workers, [&](std::size_t p) {
        const auto path = sample_path(law, N, stream_seed(seed, kPurposeProbe, p), false);
        for (std::size_t i = 0; i < K; ++i) {
            const std::size_t n = ns[i];
            const double c = scale[i];
            double v;
            if (probe == UiProbe::MaxGap) {
                const double m = *std::max_element(path.gaps.begin(), path.gaps.begin() + n);
                v = std::pow((m + 1.0) / c, -r);
            } else if (probe == UiProbe::AlphaOneSum) {
                v = std::pow((path.T[n - 1] + 1.0) / c, -r);
            } else {
                double s = 0.0;
                for (std::size_t h = n - 1; h >= 1; --h) s += double(n - h) * std::pow((path.T[h - 1] + 1.0) / c, -r);
                v = (double(n) * std::pow(1.0 / c, -r) + 2.0 * s) / (double(n) * double(n));
            }
            vals[p * K + i] = v;
        }
    });
    UiProbeResult res;
    res.probe = probe;
    res.r = r;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < K; ++i) {
        const Estimate e = fold(vals, K, i);
        res.rows.push_back({ns[i], e});
        res.max_value = std::max(res.max_value, e.value);
        lx.push_back(std::log(double(ns[i])));
        ly.push_back(std::log(e.value));
    }
    res.slope = ols_slope(lx, ly);
    return res;
}

Estimate harmonic_mean_probe(std::size_t n, std::size_t reps, std::uint64_t seed, int workers, HarmonicForm form) {
    if (n < 2) domain("harmonic_mean_probe: n must be at least 2");
    if (reps == 0) domain("harmonic_mean_probe: reps must be at least 1");
    const auto law = RenewalLaw::reciprocal_uniform();
    const double b = law.quantile_b(double(n));
    const double c = law.ell(b) / law.ell_star(b);
    const double ln = std::log(double(n));
    std::vector<double> v(reps);
    parallel_for(reps, workers, [&](std::size_t p) {
        const std::uint64_t s = stream_seed(seed, kPurposeHarm + (form == HarmonicForm::Renewal), p);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; i += 2) {
            const auto blk = counter_block(s, kHarmStream, i / 2);
            if (form == HarmonicForm::Direct) {
                acc += 1.0 / to_open01(blk[0]);
                if (i + 1 < n) acc += 1.0 / to_open01(blk[1]);
            } else {
                acc += law.sample_gap(to_open01(blk[0]));
                if (i + 1 < n) acc += law.sample_gap(to_open01(blk[1]));
            }
        }
        v[p] = form == HarmonicForm::Direct ? ln * double(n) / acc : b / (acc * c);
    });
    return mean_se(v);
}

ScaleProbe fclt_scale_probe(const RenewalLaw& law, std::size_t n, std::size_t reps, double r, std::uint64_t seed,
                            int workers) {
    if (law.finite_mean()) domain("fclt_scale_probe: needs an infinite-mean gap law");
    const double alpha = law.alpha();
    if (!(alpha < 1.0)) domain("fclt_scale_probe: needs alpha < 1");
    if (!(r > 0.0)) domain("fclt_scale_probe: r must be positive");
    if (n == 0 || reps < 2) domain("fclt_scale_probe: need n >= 1 and reps >= 2");
    const double b = law.quantile_b(double(n));
    std::vector<double> v(reps);
    parallel_for(reps, workers, [&](std::size_t p) {
        const std::uint64_t s = stream_seed(seed, kPurposeProbe, p);
        double t = 0.0;
        for (std::size_t k = 0; k < n; ++k) t += law.sample_gap(gap_uniform(s, k));
        v[p] = std::pow(t / b, -r);
    });
    ScaleProbe out;
    out.r = r;
    out.moment = mean_se(v);
    const double ism = inverse_stable_moment(r, alpha);
    out.kappa = std::pow(out.moment.value / ism, -alpha / r);
    out.se = out.kappa * (alpha / r) * out.moment.se / out.moment.value;
    const double g = gamma_fn(1.0 - alpha);
    out.gamma_convention = std::abs(std::log(out.kappa / g)) < std::abs(std::log(out.kappa));
    out.selected = out.gamma_convention ? g : 1.0;
    return out;
}

}  // namespace lmr
