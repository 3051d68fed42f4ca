#include "lmr/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lmr/expsum.hpp"
#include "lmr/parallel.hpp"
#include "lmr/random.hpp"
#include "lmr/specfun.hpp"

namespace lmr {
namespace {

constexpr std::uint64_t kPathStream = 0x57AB1Eull;

// Unit-cell integrals of |x - y|^(-q) at lag k, and the sum
// S(M) = sum_{k=2}^{M-1} (M - k) (g(k) - k^(-q)).
double cell_g(double q, double k) {
    const double c = 1.0 / ((1.0 - q) * (2.0 - q));
    if (k == 0.0) return 2.0 * c;
    const double e = 2.0 - q;
    return c * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(k - 1.0, e));
}

double lag_bias(double q, double k) {
    if (k < 20.0) return cell_g(q, k) - std::pow(k, -q);
    const double a = q * (q + 1.0);
    const double b = a * (q + 2.0) * (q + 3.0);
    const double c = b * (q + 4.0) * (q + 5.0);
    const double k2 = 1.0 / (k * k);
    return std::pow(k, -q) * k2 * (a / 12.0 + k2 * (b / 360.0 + k2 * c / 20160.0));
}

double lag_bias_sum(double q, std::size_t M) {
    static std::mutex mu;
    static std::map<std::pair<double, std::size_t>, double> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({q, M});
        if (it != cache.end()) return it->second;
    }
    double s = 0.0;
    for (std::size_t k = M - 1; k >= 2; --k) s += double(M - k) * lag_bias(q, double(k));
    std::lock_guard<std::mutex> lock(mu);
    cache[{q, M}] = s;
    return s;
}

}  // namespace

void StableSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::ostringstream os;
        os << "alpha = " << alpha << " outside (0, 1)";
        throw std::domain_error(os.str());
    }
    if (!(kappa > 0.0)) {
        std::ostringstream os;
        os << "kappa = " << kappa << " outside (0, inf)";
        throw std::domain_error(os.str());
    }
}

double kanter_log_stable(double alpha, double U, double E) {
    const double b = 1.0 - alpha;
    const double num = alpha * std::log(std::sin(alpha * U)) + b * std::log(std::sin(b * U)) - std::log(std::sin(U));
    return num / alpha - (b / alpha) * std::log(E);
}

double sample_standard_stable(const StableSpec& spec, std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const auto blk = counter_block(seed, stream, index);
    const double U = std::numbers::pi * to_open01(blk[0]);
    const double E = -std::log(to_open01(blk[1]));
    return std::exp(kanter_log_stable(spec.alpha, U, E) + std::log(spec.kappa) / spec.alpha);
}

SubordinatorPath SubordinatorPath::coarsen(std::size_t factor) const {
    if (factor == 0 || M % factor != 0) throw std::invalid_argument("coarsen: factor must divide M");
    SubordinatorPath p = *this;
    p.M = M / factor;
    p.values.resize(p.M + 1);
    p.increments.assign(p.M, 0.0);
    for (std::size_t i = 0; i <= p.M; ++i) p.values[i] = values[i * factor];
    for (std::size_t i = 0; i < M; ++i) p.increments[i / factor] += increments[i];
    return p;
}

SubordinatorPath sample_subordinator(const StableSpec& spec, std::size_t M, std::uint64_t seed) {
    spec.validate();
    if (M < 2) throw std::domain_error("sample_subordinator: M must be at least 2");
    SubordinatorPath p;
    p.M = M;
    p.alpha = spec.alpha;
    p.kappa = spec.kappa;
    p.seed = seed;
    p.values.resize(M + 1);
    p.increments.resize(M);
    const double scale = std::pow(1.0 / double(M), 1.0 / spec.alpha);
    double acc = 0.0;
    p.values[0] = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        p.increments[i] = scale * sample_standard_stable(spec, seed, kPathStream, i);
        acc += p.increments[i];
        p.values[i + 1] = acc;
    }
    return p;
}

IntegralResult integral_functional(const std::vector<double>& increments, double alpha, double d,
                                   double inv_moment) {
    if (!(d > 0.0 && d < 0.5)) throw std::domain_error("integral_functional: d must lie in (0, 1/2)");
    const double r = 1.0 - 2.0 * d;
    if (!(r < alpha)) {
        std::ostringstream os;
        os << "integral_functional: 1 - 2d = " << r << " must be below alpha = " << alpha;
        throw std::domain_error(os.str());
    }
    if (increments.size() < 2) throw std::domain_error("integral_functional: need M >= 2");
    const std::size_t M = increments.size();
    for (double g : increments)
        if (!(g >= 0.0) || !std::isfinite(g)) throw std::domain_error("integral_functional: increments must be finite and nonnegative");
    const double q = r / alpha;
    const double Md = double(M);
    const double delta = 1.0 / Md;
    // Cell representatives are L(i/M), i = 1..M; consecutive gaps are the
    // increments 2..M.
    const double* gaps = increments.data() + 1;

    IntegralResult out;
    if (M >= 3) {
        double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
        for (std::size_t j = 1; j + 1 < M; ++j) xmin = std::min(xmin, gaps[j] + gaps[j - 1]);
        for (std::size_t j = 0; j + 1 < M; ++j) xmax += gaps[j];
        if (!(xmin > 0.0)) throw std::domain_error("integral_functional: path must be strictly increasing");
        const ExpSum K = power_kernel(r, {xmin, std::max(xmax, xmin), 1e-10, true});
        out.off_diagonal = 2.0 * pair_sum_gaps(gaps, M, K, 2) / (Md * Md);
    }
    const double scale = inv_moment * std::pow(delta, 2.0 - q);
    out.band = scale * (Md * cell_g(q, 0.0) + 2.0 * (Md - 1.0) * cell_g(q, 1.0));
    out.lag_correction = M >= 3 ? 2.0 * scale * lag_bias_sum(q, M) : 0.0;
    out.value = out.off_diagonal + out.band + out.lag_correction;
    return out;
}

IntegralResult integral_functional(const SubordinatorPath& path, double d) {
    const double r = 1.0 - 2.0 * d;
    const double inv = std::pow(path.kappa, -r / path.alpha) * inverse_stable_moment(r, path.alpha);
    return integral_functional(path.increments, path.alpha, d, inv);
}

std::uint64_t z_path_seed(std::uint64_t seed, std::uint64_t p) { return derive_seed(seed, p); }

std::vector<ZSample> sample_Z(double alpha, double d, std::size_t M, std::size_t n_paths, std::uint64_t seed,
                              int workers, std::size_t refine) {
    const double C = nvm_constant(alpha, d);  // validates 1 - 2d < alpha <= 1
    if (!(alpha < 1.0)) throw std::domain_error("sample_Z: alpha must be below 1");
    if (refine == 0) refine = 1;
    std::vector<ZSample> out(n_paths);
    const StableSpec spec{alpha, 1.0};
    parallel_for(n_paths, workers, [&](std::size_t p) {
        const std::uint64_t s = z_path_seed(seed, p);
        auto path = sample_subordinator(spec, M * refine, s);
        if (refine > 1) path = path.coarsen(refine);
        out[p] = ZSample{C * integral_functional(path, d).value, alpha, d, M, true, s};
    });
    return out;
}

MomentEstimate nu_k_estimate(double alpha, double d, int k, std::size_t M, std::size_t n_paths, std::uint64_t seed,
                             int workers) {
    if (k < 1) throw std::domain_error("nu_k_estimate: k must be at least 1");
    const double C = nvm_constant(alpha, d);
    const auto z = sample_Z(alpha, d, M, n_paths, seed, workers);
    double m = 0.0, m2 = 0.0;
    for (const auto& s : z) {
        const double v = std::pow(s.value / C, k);
        m += v;
        m2 += v * v;
    }
    const double n = double(n_paths);
    m /= n;
    const double var = n > 1 ? std::max(0.0, (m2 - n * m * m) / (n - 1.0)) : 0.0;
    MomentEstimate e;
    e.value = m;
    e.se = std::sqrt(var / n);
    e.infinite_variance_warning = k > 4 || !(k * (1.0 - 2.0 * d) < alpha);
    return e;
}

}  // namespace lmr
