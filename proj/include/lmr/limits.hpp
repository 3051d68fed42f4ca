#pragma once

// Sampled series Y_k = X_{T_k}, their covariance, self-normalized sums and
// the diagnostics around the two limit regimes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lmr/longmem.hpp"
#include "lmr/renewal.hpp"

namespace lmr {

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

/// Mean and standard error of a sample (se = 0 for fewer than two values).
Estimate mean_se(const std::vector<double>& v);

/// Seed for replicate `index` of a given purpose under a base seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index);

// ---------------------------------------------------------------- regimes

enum class Regime { Normal, NVM };
enum class RegimeReason { FiniteMean, AlphaAtMostR, AlphaOne, Intermediate };

std::string to_string(Regime r);
std::string to_string(RegimeReason r);

struct RegimeLabel {
    Regime regime = Regime::Normal;
    RegimeReason reason = RegimeReason::FiniteMean;
};

/// alpha = nullopt stands for a finite-mean gap law.
RegimeLabel classify_regime(std::optional<double> alpha, double d);
RegimeLabel classify_regime(const RenewalLaw& law, double d);

// ---------------------------------------------------------------- sampled series

inline constexpr std::uint64_t kDefaultTimeCap = std::uint64_t(1) << 28;

struct SampledSeries {
    std::vector<double> Y;
    RenewalPath path;       // lattice renewal times
    std::uint64_t x_seed = 0;
    std::uint64_t truncation = 0;
    std::size_t rejections = 0;  // paths redrawn because T_n exceeded the cap
};

/// Y_1..Y_n from a lattice renewal path and X generated up to T_n. Paths with
/// T_n > time_cap are redrawn; after max_redraws a ResourceError carries the
/// last realized T_n.
SampledSeries sample_Y(const LinearProcessSpec& spec, const RenewalLaw& law, std::size_t n, std::uint64_t seed,
                       std::uint64_t time_cap = kDefaultTimeCap, std::size_t max_redraws = 100);

// ---------------------------------------------------------------- covariance

struct SigmaYTable {
    std::vector<std::size_t> lags;
    std::vector<Estimate> sigma;
    std::size_t reps = 0;
};

/// MC average of exact_acov(T_h) over lattice renewal draws, at every lag in `lags`.
SigmaYTable sigma_Y_mc(const RenewalLaw& law, const LinearProcessSpec& spec, const std::vector<std::size_t>& lags,
                       std::size_t reps, std::uint64_t seed, int workers = 1);
Estimate sigma_Y_mc(const RenewalLaw& law, const LinearProcessSpec& spec, std::size_t h, std::size_t reps,
                    std::uint64_t seed, int workers = 1);

/// Leading-order sigma_Y(h) for infinite-mean laws. kappa is the Laplace
/// scale of the limit of T_h / b_h (1 or Gamma(1 - alpha)); unused at alpha = 1.
double sigma_Y_asymptotic(const RenewalLaw& law, const LinearProcessSpec& spec, double h, double kappa = 1.0);

/// n sigma(0) + 2 sum_{h<n} (n - h) sigma(h) from a table indexed by lag.
double variance_sum_Y(const std::vector<double>& sigma, std::size_t n);

/// Var(Y_1 + ... + Y_n) by MC over renewal paths, each contributing
/// n exact_acov(0) + 2 sum_h (n - h) exact_acov(T_h).
Estimate variance_sum_Y(const RenewalLaw& law, const LinearProcessSpec& spec, std::size_t n, std::size_t reps,
                        std::uint64_t seed, int workers = 1);

/// sum_{k,k'} exact_acov(|T_k - T_k'|) for one path of integer times.
double conditional_variance(const RenewalPath& path, const LinearProcessSpec& spec);

/// Same sum from pair counts of the time indicator (FFT autocorrelation).
double toeplitz_sum_fft(const RenewalPath& path, const LinearProcessSpec& spec);

// ---------------------------------------------------------------- coefficient profile

inline constexpr std::uint64_t kDefaultWindowCap = std::uint64_t(1) << 24;

struct CoefficientProfile {
    std::int64_t j_min = 0;       // d holds d_{n,j} for j = j_min..T_n
    std::vector<double> d;
    double window_sum_sq = 0.0;
    double tail_sum_sq = 0.0;     // sum over j < j_min, in closed form
    double d2 = 0.0;              // sum of all d_{n,j}^2
    double lindeberg_ratio = 0.0;
    std::int64_t argmax_j = 0;
    double toeplitz = 0.0;        // sum_{k,k'} exact_acov(|T_k - T_k'|)
    double identity_rel_error = 0.0;  // |sigma^2 d2 - toeplitz| / toeplitz
};

/// d_{n,j} = sum_k a_{T_k - j} by FFT correlation on [T_1 - past, T_n]
/// (past = 0 means T_n), with the remaining past summed through an
/// exponential-sum fit of the coefficients.
CoefficientProfile coefficient_profile(const RenewalPath& path, const LinearProcessSpec& spec, std::uint64_t past = 0,
                                       std::uint64_t window_cap = kDefaultWindowCap, bool check_identity = true);

// ---------------------------------------------------------------- self-normalized sums

enum class SnRoute { Auto, Linear, ConditionalGaussian };
std::string to_string(SnRoute r);
SnRoute sn_route_from_string(const std::string& s);

struct SnOptions {
    SnRoute route = SnRoute::Auto;
    std::size_t var_reps = 4000;
    std::uint64_t window_cap = kDefaultWindowCap;
    int workers = 1;
};

struct SnReplicate {
    double S = 0.0;
    double R = 0.0;            // conditional over unconditional variance
    double V_cond = 0.0;
    double T_n = 0.0;
    double identity_rel_error = 0.0;  // linear route only
    double lindeberg_ratio = 0.0;     // linear route only
    std::uint64_t seed = 0;
};

struct SnBatch {
    std::vector<SnReplicate> reps;
    Estimate variance;  // Var(sum Y_k)
    SnRoute route = SnRoute::Linear;
};

/// S_n = sum Y_k / sqrt(Var sum Y_k) per replicate. The linear route sums
/// d_{n,j} eps_j over the coefficient window (any innovations); the
/// conditional-Gaussian route draws sqrt(V(T)) N, which has the same law for
/// Gaussian innovations and needs no window. Auto picks the linear route for
/// finite-mean laws.
SnBatch S_n_statistic(const LinearProcessSpec& spec, const RenewalLaw& law, std::size_t n, std::size_t reps,
                      std::uint64_t seed, const SnOptions& opt = {});

/// R_n(T) = Var(sum Y_k | T) / Var(sum Y_k).
double R_n_ratio(const RenewalPath& path, const LinearProcessSpec& spec, double unconditional_variance);

struct ConditionalBatch {
    std::vector<double> S;
    CoefficientProfile profile;  // d cleared after use
};

/// S'_n for innovation replicates over one fixed path; exactly variance one.
ConditionalBatch conditional_S_prime(const RenewalPath& path, const LinearProcessSpec& spec, std::size_t reps,
                                     std::uint64_t seed, int workers = 1,
                                     std::uint64_t window_cap = kDefaultWindowCap);

// ---------------------------------------------------------------- diagnostics

struct PositivityWindow {
    bool found = false;
    std::size_t m = 0;              // smallest window with sigma(0) + 2 sum_{j<=m} sigma(j) > 0
    std::size_t positive_from = 0;  // every tabulated lag >= this has sigma > 0
};

PositivityWindow positivity_window(const std::vector<double>& sigma);

enum class UiProbe { MaxGap, DoubleAverage, AlphaOneSum, AlphaOneDoubleAverage };
std::string to_string(UiProbe p);
UiProbe ui_probe_from_string(const std::string& s);

struct UiProbeRow {
    std::size_t n = 0;
    Estimate value;
};

struct UiProbeResult {
    UiProbe probe = UiProbe::MaxGap;
    double r = 0.0;
    std::vector<UiProbeRow> rows;
    double max_value = 0.0;
    double slope = 0.0;  // OLS slope of log estimate on log n
};

/// MC estimates of the uniform-integrability quantities across n; every n
/// reuses prefixes of the same reps paths.
UiProbeResult ui_probe(const RenewalLaw& law, UiProbe probe, double r, const std::vector<std::size_t>& ns,
                       std::size_t reps, std::uint64_t seed, int workers = 1);

enum class HarmonicForm { Direct, Renewal };

/// (ln n) E[n / (1/U_1 + ... + 1/U_n)] (Direct), or
/// E[(T_n / b_n * ell(b_n) / ell*(b_n))^(-1)] for ReciprocalUniform gaps (Renewal).
Estimate harmonic_mean_probe(std::size_t n, std::size_t reps, std::uint64_t seed, int workers = 1,
                             HarmonicForm form = HarmonicForm::Direct);

struct ScaleProbe {
    double kappa = 0.0;
    double se = 0.0;
    double r = 0.0;
    Estimate moment;           // E[(T_n / b_n)^(-r)]
    double selected = 1.0;     // nearer of {1, Gamma(1 - alpha)} on the log scale
    bool gamma_convention = false;
};

ScaleProbe fclt_scale_probe(const RenewalLaw& law, std::size_t n, std::size_t reps, double r, std::uint64_t seed,
                            int workers = 1);

}  // namespace lmr
