#pragma once

// Long-memory linear processes X_t = sum_i a_i eps_{t-i} and their
// autocovariances.

#include <cstdint>
#include <string>
#include <vector>

#include "lmr/specfun.hpp"

namespace lmr {

enum class CoefFamily { FARIMA0d0, PowerLaw };
enum class InnovationLaw { Gaussian, Rademacher, CenteredExponential };

std::string to_string(CoefFamily f);
std::string to_string(InnovationLaw l);
CoefFamily coef_family_from_string(const std::string& s);
InnovationLaw innovation_law_from_string(const std::string& s);

struct LinearProcessSpec {
    double d = 0.3;
    double sigma_eps2 = 1.0;
    CoefFamily family = CoefFamily::FARIMA0d0;
    double C_d = 1.0;                 // PowerLaw scale; FARIMA uses 1/Gamma(d)
    std::uint64_t truncation = 0;     // M_c; 0 means 4n
    InnovationLaw innovation = InnovationLaw::Gaussian;

    void validate() const;
    double coef_scale() const;        // C_d of the family
    ModelConstants constants(double alpha = 0.5) const;
    std::uint64_t hash() const;
};

/// a_0..a_{count-1}.
std::vector<double> coefficients(const LinearProcessSpec& spec, std::size_t count);

/// Innovation eps_t at absolute time t (any integer), a pure function of
/// (spec, seed, t) with variance sigma_eps2.
double innovation(const LinearProcessSpec& spec, std::uint64_t seed, std::int64_t t);
void innovations(const LinearProcessSpec& spec, std::uint64_t seed, std::int64_t t0, std::size_t count,
                 double* out);

struct SeriesPath {
    std::vector<double> values;  // X_1..X_n
    std::uint64_t spec_hash = 0;
    std::uint64_t seed = 0;
    std::uint64_t truncation = 0;
    double truncation_bias = 0.0;  // exact_acov(0) - sigma^2 sum_{i<=M_c} a_i^2
};

/// Default cap on the number of stored values (innovations plus output).
inline constexpr std::uint64_t kDefaultValueBudget = std::uint64_t(1) << 27;

SeriesPath generate(const LinearProcessSpec& spec, std::size_t n, std::uint64_t seed,
                    std::uint64_t budget = kDefaultValueBudget);

/// X_t at sorted times t >= 1, generated block by block up to the last time
/// with truncation M_c. Memory is O(M_c), independent of the largest time.
std::vector<double> generate_at(const LinearProcessSpec& spec, const std::vector<std::int64_t>& times,
                                std::uint64_t truncation, std::uint64_t seed);

/// Autocovariance of the untruncated process (PowerLaw: infinite sum to 1e-10).
double exact_acov(double h, const LinearProcessSpec& spec);

/// C~_d h^(2d-1); h >= 1.
double asymptotic_acov(double h, const ModelConstants& c);

/// u(h) = exact_acov(h-1) / h^(2d-1), h >= 1.
double acov_u(double h, const LinearProcessSpec& spec);

/// sigma^2 sum_{i<=m} a_i^2.
double truncated_variance(const LinearProcessSpec& spec, std::uint64_t m);

/// Fast repeated evaluation of exact_acov at integer lags: table up to
/// `table` lags, closed form beyond (FARIMA) or the exact sum (PowerLaw).
class AcovTable {
public:
    AcovTable(const LinearProcessSpec& spec, std::size_t table = 1u << 16);
    double operator()(double h) const;
    double at0() const { return tab_[0]; }

private:
    LinearProcessSpec spec_;
    std::vector<double> tab_;
    double log_scale_ = 0.0;
};

}  // namespace lmr
