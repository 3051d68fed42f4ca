#pragma once

// Gap laws of the renewal times T_k = Delta_1 + ... + Delta_k.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace lmr {

enum class LawKind { DiscretePareto, ContinuousPareto, ReciprocalUniform, LogPerturbedPareto, Geometric, Deterministic };

std::string to_string(LawKind k);

class RenewalLaw {
public:
    static RenewalLaw discrete_pareto(double alpha);
    static RenewalLaw continuous_pareto(double alpha);
    static RenewalLaw reciprocal_uniform();
    static RenewalLaw log_perturbed_pareto(double alpha, double p);
    static RenewalLaw geometric(double q);
    static RenewalLaw deterministic();
    static RenewalLaw from_json(const nlohmann::json& j);

    nlohmann::json to_json() const;
    std::string name() const;

    LawKind kind() const { return kind_; }
    /// Tail index; throws std::domain_error for the finite-mean laws.
    double alpha() const;
    bool finite_mean() const { return kind_ == LawKind::Geometric || kind_ == LawKind::Deterministic; }
    bool heavy() const { return !finite_mean(); }
    bool integer_valued() const {
        return kind_ == LawKind::DiscretePareto || kind_ == LawKind::Geometric || kind_ == LawKind::Deterministic;
    }
    double mean() const;  // +inf for heavy laws

    /// Inverse-CDF draw from one uniform u in (0, 1).
    double sample_gap(double u) const;
    /// Integer gap >= 1: the draw itself for integer laws, its floor otherwise.
    double sample_lattice_gap(double u) const;

    /// P(Delta >= x).
    double tail(double x) const;
    /// x^alpha P(Delta >= x).
    double ell(double x) const;
    /// Generalized inverse: smallest x >= 1 with P(Delta > x) <= 1/n.
    double quantile_b(double n) const;
    /// int_1^n ell(x) / x dx.
    double ell_star(double n) const;

private:
    RenewalLaw() = default;
    struct Cache;

    LawKind kind_ = LawKind::Deterministic;
    double alpha_ = 1.0;
    double p_ = 0.0;       // LogPerturbedPareto exponent
    double q_ = 0.5;       // Geometric success probability
    double x0_ = 1.0;      // LogPerturbedPareto start of the decreasing branch
    double zeta_ = 0.0;    // zeta(1 + alpha)
    std::shared_ptr<const std::vector<double>> table_;  // DiscretePareto G(k), k = 0..K0+1

    double dp_tail_int(double k) const;   // G(k) for integer k >= 1
    double dp_tail_smooth(double x) const;  // Hurwitz extension to real x >= 1
    double lpp_raw(double x) const;
};

struct RenewalPath {
    std::vector<double> gaps;
    std::vector<double> T;
    double M_n = 0.0;
    std::uint64_t seed = 0;
};

/// i.i.d. gaps from the counter stream of `seed`; gap k uses block index k.
RenewalPath sample_path(const RenewalLaw& law, std::size_t n, std::uint64_t seed, bool lattice = false);

/// Uniform variate used for gap k of the path with the given seed.
double gap_uniform(std::uint64_t seed, std::uint64_t k);

}  // namespace lmr
