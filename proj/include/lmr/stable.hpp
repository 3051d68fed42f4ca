#pragma once

// One-sided alpha-stable laws with Laplace transform exp(-kappa s^alpha),
// subordinator paths on a grid, and the randomized variance Z(alpha, d).

#include <cstdint>
#include <vector>

namespace lmr {

struct StableSpec {
    double alpha = 0.5;
    double kappa = 1.0;
    void validate() const;
};

/// Kanter's representation from U ~ Uniform(0, pi) and E ~ Exp(1), in log
/// space; standard scale (kappa = 1).
double kanter_log_stable(double alpha, double U, double E);

/// Draw number `index` of the stream (seed, stream).
double sample_standard_stable(const StableSpec& spec, std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t index);

struct SubordinatorPath {
    std::size_t M = 0;
    std::vector<double> values;      // L at i/M, i = 0..M
    std::vector<double> increments;  // L(i/M) - L((i-1)/M), i = 1..M
    double alpha = 0.5;
    double kappa = 1.0;
    std::uint64_t seed = 0;

    /// Path on the grid M / factor obtained by keeping every factor-th point.
    SubordinatorPath coarsen(std::size_t factor) const;
};

SubordinatorPath sample_subordinator(const StableSpec& spec, std::size_t M, std::uint64_t seed);

struct IntegralResult {
    double value = 0.0;
    double off_diagonal = 0.0;    // midpoint cells with |i - j| >= 2
    double band = 0.0;            // expected contribution of |i - j| <= 1
    double lag_correction = 0.0;  // expected midpoint bias of the |i - j| >= 2 cells
};

/// Grid approximation of int int |L_x - L_y|^(-r) dx dy with r = 1 - 2d, for
/// the M grid increments of a self-similar process with index alpha and
/// E L_1^(-r) = inv_moment. The identity path is alpha = 1, inv_moment = 1.
IntegralResult integral_functional(const std::vector<double>& increments, double alpha, double d,
                                   double inv_moment);

/// Same for a stable subordinator path; requires 1 - 2d < alpha < 1.
IntegralResult integral_functional(const SubordinatorPath& path, double d);

struct ZSample {
    double value = 0.0;
    double alpha = 0.0;
    double d = 0.0;
    std::size_t M = 0;
    bool diagonal_corrected = true;
    std::uint64_t seed = 0;
};

/// Seed of path p in a batch with the given base seed.
std::uint64_t z_path_seed(std::uint64_t seed, std::uint64_t p);

/// n_paths values C_{alpha,1-2d} * integral_functional, path p from z_path_seed(seed, p).
/// With refine > 1 each path is drawn on M * refine points and coarsened to M.
std::vector<ZSample> sample_Z(double alpha, double d, std::size_t M, std::size_t n_paths, std::uint64_t seed,
                              int workers = 1, std::size_t refine = 1);

struct MomentEstimate {
    double value = 0.0;
    double se = 0.0;
    bool infinite_variance_warning = false;
};

/// MC estimate of E[(int int |L_t - L_s|^(-r))^k].
MomentEstimate nu_k_estimate(double alpha, double d, int k, std::size_t M, std::size_t n_paths, std::uint64_t seed,
                             int workers = 1);

}  // namespace lmr
