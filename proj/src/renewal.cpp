#include "lmr/renewal.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lmr/random.hpp"
#include "lmr/specfun.hpp"

namespace lmr {
namespace {

constexpr std::size_t K0 = std::size_t(1) << 16;
constexpr double kEuler = std::numbers::e;
constexpr std::uint64_t kGapStream = 0x6A9D5EEDull;

[[noreturn]] void domain(const std::string& what) { throw std::domain_error(what); }

void check_alpha(double alpha, bool allow_one) {
    if (!(alpha > 0.0 && (allow_one ? alpha <= 1.0 : alpha < 1.0))) {
        std::ostringstream os;
        os << "alpha = " << alpha << " outside " << (allow_one ? "(0, 1]" : "(0, 1)");
        domain(os.str());
    }
}

// Integrate f over [a, b] with GSL QAG (21-point), relative tolerance tol.
template <class F>
double integrate(F&& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    gsl_function G;
    G.function = [](double x, void* p) { return (*static_cast<F*>(p))(x); };
    G.params = &f;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(1000);
    double r = 0.0, err = 0.0;
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    gsl_integration_qag(&G, a, b, 0.0, tol, 1000, GSL_INTEG_GAUSS21, ws, &r, &err);
    gsl_set_error_handler(old);
    gsl_integration_workspace_free(ws);
    return r;
}

}  // namespace

std::string to_string(LawKind k) {
    switch (k) {
        case LawKind::DiscretePareto: return "DiscretePareto";
        case LawKind::ContinuousPareto: return "ContinuousPareto";
        case LawKind::ReciprocalUniform: return "ReciprocalUniform";
        case LawKind::LogPerturbedPareto: return "LogPerturbedPareto";
        case LawKind::Geometric: return "Geometric";
        default: return "Deterministic";
    }
}

RenewalLaw RenewalLaw::discrete_pareto(double alpha) {
    check_alpha(alpha, true);
    RenewalLaw L;
    L.kind_ = LawKind::DiscretePareto;
    L.alpha_ = alpha;
    L.zeta_ = zeta(1.0 + alpha);
    // G(k) = P(Delta >= k); built backwards from the Hurwitz tail for stability.
    auto tab = std::make_shared<std::vector<double>>(K0 + 2);
    auto& G = *tab;
    G[K0 + 1] = hurwitz_zeta(1.0 + alpha, double(K0 + 1)) / L.zeta_;
    for (std::size_t k = K0; k >= 1; --k) G[k] = G[k + 1] + std::pow(double(k), -1.0 - alpha) / L.zeta_;
    G[0] = 1.0;
    G[1] = 1.0;
    L.table_ = tab;
    return L;
}

RenewalLaw RenewalLaw::continuous_pareto(double alpha) {
    check_alpha(alpha, true);
    RenewalLaw L;
    L.kind_ = LawKind::ContinuousPareto;
    L.alpha_ = alpha;
    return L;
}

RenewalLaw RenewalLaw::reciprocal_uniform() {
    RenewalLaw L;
    L.kind_ = LawKind::ReciprocalUniform;
    L.alpha_ = 1.0;
    return L;
}

RenewalLaw RenewalLaw::log_perturbed_pareto(double alpha, double p) {
    check_alpha(alpha, true);
    if (!(p >= 0.0)) domain("LogPerturbedPareto: p must be nonnegative");
    RenewalLaw L;
    L.kind_ = LawKind::LogPerturbedPareto;
    L.alpha_ = alpha;
    L.p_ = p;
    // x^-alpha ln(e-1+x)^p increases on [1, x0] when p/e > alpha; the tail is
    // flat there and decreasing beyond x0.
    auto slope = [&](double x) { return -alpha / x + p / ((kEuler - 1.0 + x) * std::log(kEuler - 1.0 + x)); };
    if (slope(1.0) > 0.0) {
        double lo = 1.0, hi = 2.0;
        while (slope(hi) > 0.0) hi *= 2.0;
        for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            (slope(mid) > 0.0 ? lo : hi) = mid;
        }
        L.x0_ = 0.5 * (lo + hi);
    }
    return L;
}

RenewalLaw RenewalLaw::geometric(double q) {
    if (!(q > 0.0 && q <= 1.0)) {
        std::ostringstream os;
        os << "q = " << q << " outside (0, 1]";
        domain(os.str());
    }
    RenewalLaw L;
    L.kind_ = LawKind::Geometric;
    L.q_ = q;
    return L;
}

RenewalLaw RenewalLaw::deterministic() {
    RenewalLaw L;
    L.kind_ = LawKind::Deterministic;
    return L;
}

RenewalLaw RenewalLaw::from_json(const nlohmann::json& j) {
    const std::string name = j.at("law").get<std::string>();
    auto num = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_number()) domain(std::string("law.") + key + " missing or not a number");
        return j.at(key).get<double>();
    };
    if (name == "DiscretePareto") return discrete_pareto(num("alpha"));
    if (name == "ContinuousPareto") return continuous_pareto(num("alpha"));
    if (name == "ReciprocalUniform") return reciprocal_uniform();
    if (name == "LogPerturbedPareto") return log_perturbed_pareto(num("alpha"), num("p"));
    if (name == "Geometric") return geometric(num("q"));
    if (name == "Deterministic") return deterministic();
    domain("law = '" + name +
           "' is not one of DiscretePareto, ContinuousPareto, ReciprocalUniform, LogPerturbedPareto, Geometric, "
           "Deterministic");
}

nlohmann::json RenewalLaw::to_json() const {
    nlohmann::json j = {{"law", to_string(kind_)}};
    switch (kind_) {
        case LawKind::DiscretePareto:
        case LawKind::ContinuousPareto: j["alpha"] = alpha_; break;
        case LawKind::LogPerturbedPareto:
            j["alpha"] = alpha_;
            j["p"] = p_;
            break;
        case LawKind::Geometric: j["q"] = q_; break;
        default: break;
    }
    return j;
}

std::string RenewalLaw::name() const {
    std::ostringstream os;
    os << to_string(kind_);
    switch (kind_) {
        case LawKind::DiscretePareto:
        case LawKind::ContinuousPareto: os << "(" << alpha_ << ")"; break;
        case LawKind::LogPerturbedPareto: os << "(" << alpha_ << ", " << p_ << ")"; break;
        case LawKind::Geometric: os << "(" << q_ << ")"; break;
        case LawKind::Deterministic: os << "(1)"; break;
        default: break;
    }
    return os.str();
}

double RenewalLaw::alpha() const {
    if (finite_mean()) domain(name() + " has finite mean and no tail index");
    return alpha_;
}

double RenewalLaw::mean() const {
    if (kind_ == LawKind::Geometric) return 1.0 / q_;
    if (kind_ == LawKind::Deterministic) return 1.0;
    return std::numeric_limits<double>::infinity();
}

double RenewalLaw::dp_tail_int(double k) const {
    if (k <= 1.0) return 1.0;
    if (k <= double(K0 + 1)) return (*table_)[static_cast<std::size_t>(k)];
    return hurwitz_zeta(1.0 + alpha_, k) / zeta_;
}

double RenewalLaw::dp_tail_smooth(double x) const { return hurwitz_zeta(1.0 + alpha_, x) / zeta_; }

double RenewalLaw::lpp_raw(double x) const {
    return std::pow(x, -alpha_) * std::pow(std::log(kEuler - 1.0 + x), p_);
}

double RenewalLaw::tail(double x) const {
    if (x <= 1.0) return 1.0;
    switch (kind_) {
        case LawKind::DiscretePareto: return dp_tail_int(std::ceil(x));
        case LawKind::ContinuousPareto: return std::pow(x, -alpha_);
        case LawKind::ReciprocalUniform: return 1.0 / x;
        case LawKind::LogPerturbedPareto: return x <= x0_ ? 1.0 : lpp_raw(x) / lpp_raw(x0_);
        case LawKind::Geometric: return std::pow(1.0 - q_, std::ceil(x) - 1.0);
        default: return 0.0;
    }
}

double RenewalLaw::ell(double x) const {
    const double a = alpha();
    if (!(x >= 1.0)) domain("ell: x must be at least 1");
    return std::pow(x, a) * tail(x);
}

double RenewalLaw::sample_gap(double u) const {
    if (!(u > 0.0 && u < 1.0)) domain("sample_gap: u must lie in (0, 1)");
    switch (kind_) {
        case LawKind::DiscretePareto: {
            const auto& G = *table_;
            if (u > G[K0 + 1]) {
                // Largest k with G(k) >= u; G is decreasing.
                std::size_t lo = 1, hi = K0 + 1;  // G[lo] >= u > G[hi]
                while (hi - lo > 1) {
                    const std::size_t mid = (lo + hi) / 2;
                    (G[mid] >= u ? lo : hi) = mid;
                }
                return double(lo);
            }
            const double guess = std::pow(u * alpha_ * zeta_, -1.0 / alpha_);
            if (guess > 0x1p40) return std::floor(guess);
            double k = std::max(double(K0 + 1), std::floor(guess));
            while (k > double(K0 + 1) && dp_tail_int(k) < u) k -= 1.0;
            while (dp_tail_int(k + 1.0) >= u) k += 1.0;
            return k;
        }
        case LawKind::ContinuousPareto: return std::pow(u, -1.0 / alpha_);
        case LawKind::ReciprocalUniform: return 1.0 / u;
        case LawKind::LogPerturbedPareto: {
            // Solve tail(x) = u on [x0, inf) by bisection in log x.
            const double target = std::log(u) + std::log(lpp_raw(x0_));
            auto f = [&](double lx) { return -alpha_ * lx + p_ * std::log(std::log(kEuler - 1.0 + std::exp(lx))); };
            double lo = std::log(x0_), hi = lo + 1.0;
            while (f(hi) > target) hi = lo + 2.0 * (hi - lo);
            for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
                const double mid = 0.5 * (lo + hi);
                (f(mid) > target ? lo : hi) = mid;
            }
            return std::exp(0.5 * (lo + hi));
        }
        case LawKind::Geometric:
            if (q_ >= 1.0) return 1.0;
            return 1.0 + std::floor(std::log(u) / std::log1p(-q_));
        default: return 1.0;
    }
}

double RenewalLaw::sample_lattice_gap(double u) const { return std::max(1.0, std::floor(sample_gap(u))); }

double RenewalLaw::quantile_b(double n) const {
    if (!(n >= 1.0)) domain("quantile_b: n must be at least 1");
    const double target = 1.0 / n;
    switch (kind_) {
        case LawKind::ContinuousPareto: return std::pow(n, 1.0 / alpha_);
        case LawKind::ReciprocalUniform: return n;
        case LawKind::Deterministic: return 1.0;
        case LawKind::Geometric: {
            if (q_ >= 1.0) return 1.0;
            // Smallest integer k >= 1 with (1-q)^k <= 1/n.
            double k = std::max(1.0, std::ceil(std::log(target) / std::log1p(-q_)));
            while (k > 1.0 && std::pow(1.0 - q_, k - 1.0) <= target) k -= 1.0;
            while (std::pow(1.0 - q_, k) > target) k += 1.0;
            return k;
        }
        case LawKind::DiscretePareto: {
            // Smallest integer k >= 1 with G(k+1) <= 1/n.
            if (dp_tail_int(2.0) <= target) return 1.0;
            double lo = 1.0, hi = 2.0;  // G(lo+1) > target >= G(hi+1)
            while (dp_tail_int(hi + 1.0) > target) {
                lo = hi;
                hi *= 2.0;
            }
            while (hi - lo > std::max(1.0, hi * 0x1p-50)) {
                const double mid = std::floor(0.5 * (lo + hi));
                (dp_tail_int(mid + 1.0) > target ? lo : hi) = mid;
            }
            return hi;
        }
        case LawKind::LogPerturbedPareto: {
            if (target >= 1.0) return 1.0;
            double lo = x0_, hi = 2.0 * x0_;
            while (tail(hi) > target) hi *= 2.0;
            for (int i = 0; i < 300 && hi - lo > 1e-15 * hi; ++i) {
                const double mid = 0.5 * (lo + hi);
                (tail(mid) > target ? lo : hi) = mid;
            }
            return hi;
        }
    }
    return 1.0;
}

double RenewalLaw::ell_star(double n) const {
    const double a = alpha();
    if (!(n >= 1.0)) domain("ell_star: n must be at least 1");
    if (n == 1.0) return 0.0;
    switch (kind_) {
        case LawKind::ContinuousPareto:
        case LawKind::ReciprocalUniform: return std::log(n);
        case LawKind::DiscretePareto: {
            // ell(x)/x = x^(a-1) G(ceil x); exact per unit interval (k-1, k].
            auto piece = [&](double k, double upper) {
                return dp_tail_int(k) * (std::pow(upper, a) - std::pow(k - 1.0, a)) / a;
            };
            const double K1 = double(K0);
            const double last = std::ceil(n);
            double s = 0.0;
            const double direct_end = std::min(last - 1.0, K1);
            for (double k = 2.0; k <= direct_end; k += 1.0) s += piece(k, k);
            if (last - 1.0 > K1) {
                // Interior pieces k = K1+1 .. last-1 by Euler-Maclaurin on the
                // smooth extension f(k) = G(k) (k^a - (k-1)^a) / a.
                auto f = [&](double k) { return dp_tail_smooth(k) * (std::pow(k, a) - std::pow(k - 1.0, a)) / a; };
                const double lo = K1 + 1.0, hi = last - 1.0;
                auto df = [&](double k) {
                    const double h = 1e-3 * k;
                    return (f(k + h) - f(k - h)) / (2.0 * h);
                };
                double em;
                if (hi - lo < 64.0) {
                    em = 0.0;
                    for (double k = lo; k <= hi; k += 1.0) em += f(k);
                } else {
                    const double integral = integrate(
                        [&](double v) {
                            const double k = std::exp(v);
                            return f(k) * k;
                        },
                        std::log(lo), std::log(hi), 1e-10);
                    em = integral + 0.5 * (f(lo) + f(hi)) + (df(hi) - df(lo)) / 12.0;
                }
                s += em;
            }
            if (last >= 2.0) s += piece(last, n);
            return s;
        }
        case LawKind::LogPerturbedPareto: {
            const double lx0 = std::log(x0_), ln = std::log(n);
            double s = 0.0;
            // ell(x) = x^a on [1, x0].
            s += (std::pow(std::min(n, x0_), a) - 1.0) / a;
            if (n > x0_) {
                const double c = 1.0 / lpp_raw(x0_);
                s += integrate([&](double v) { return c * std::pow(std::log(kEuler - 1.0 + std::exp(v)), p_); }, lx0,
                               ln, 1e-10);
            }
            return s;
        }
        default: break;
    }
    return 0.0;
}

double gap_uniform(std::uint64_t seed, std::uint64_t k) { return to_open01(counter_block(seed, kGapStream, k)[0]); }

RenewalPath sample_path(const RenewalLaw& law, std::size_t n, std::uint64_t seed, bool lattice) {
    if (n == 0) domain("sample_path: n must be at least 1");
    RenewalPath p;
    p.seed = seed;
    p.gaps.resize(n);
    p.T.resize(n);
    double t = 0.0, m = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = gap_uniform(seed, k);
        const double g = lattice ? law.sample_lattice_gap(u) : law.sample_gap(u);
        p.gaps[k] = g;
        t += g;
        m = std::max(m, g);
        p.T[k] = t;
    }
    p.M_n = m;
    return p;
}

}  // namespace lmr
