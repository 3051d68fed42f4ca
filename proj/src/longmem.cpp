#include "lmr/longmem.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lmr/errors.hpp"
#include "lmr/fft.hpp"
#include "lmr/hash.hpp"
#include "lmr/random.hpp"

namespace lmr {
namespace {

constexpr std::uint64_t kInnovationStream = 0x1E7A11CEull;

std::uint64_t time_counter(std::int64_t t) {
    return static_cast<std::uint64_t>(t) ^ (std::uint64_t(1) << 63);
}

// floor(t / 128) as a counter, and the bit position inside the block.
std::uint64_t sign_block(std::int64_t t) {
    const std::int64_t q = t >= 0 ? t / 128 : -((-t + 127) / 128);
    return time_counter(q);
}

// sum_{i>=1} i^(d-1) (i+h)^(d-1): direct part plus Euler-Maclaurin tail.
double powerlaw_cross_sum(double d, double h) {
    const double a = d - 1.0;
    const int N = 1000;
    double direct = 0.0;
    for (int i = N - 1; i >= 1; --i) direct += std::pow(double(i), a) * std::pow(i + h, a);

    struct P {
        double a, h;
    } par{a, h};
    gsl_function F;
    F.function = [](double x, void* vp) {
        const auto* q = static_cast<const P*>(vp);
        return std::pow(x, q->a) * std::pow(x + q->h, q->a);
    };
    F.params = &par;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(200);
    double integral = 0.0, abserr = 0.0;
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    gsl_integration_qagiu(&F, N, 0.0, 1e-13, 200, ws, &integral, &abserr);
    gsl_set_error_handler(old);
    gsl_integration_workspace_free(ws);

    const double x = N;
    const double f = std::pow(x, a) * std::pow(x + h, a);
    const double g1 = a / x + a / (x + h);
    const double g2 = -a / (x * x) - a / ((x + h) * (x + h));
    const double g3 = 2 * a / (x * x * x) + 2 * a / ((x + h) * (x + h) * (x + h));
    const double f1 = f * g1;
    const double f3 = f * (g1 * g1 * g1 + 3 * g1 * g2 + g3);
    return direct + integral + 0.5 * f - f1 / 12.0 + f3 / 720.0;
}

double farima_log_scale(double d) { return log_gamma(1 - 2 * d) - log_gamma(d) - log_gamma(1 - d); }

}  // namespace

std::string to_string(CoefFamily f) { return f == CoefFamily::FARIMA0d0 ? "FARIMA0d0" : "PowerLaw"; }

std::string to_string(InnovationLaw l) {
    switch (l) {
        case InnovationLaw::Gaussian: return "Gaussian";
        case InnovationLaw::Rademacher: return "Rademacher";
        default: return "CenteredExponential";
    }
}

CoefFamily coef_family_from_string(const std::string& s) {
    if (s == "FARIMA0d0" || s == "farima") return CoefFamily::FARIMA0d0;
    if (s == "PowerLaw" || s == "powerlaw") return CoefFamily::PowerLaw;
    throw std::domain_error("unknown coefficient family '" + s + "' (FARIMA0d0 | PowerLaw)");
}

InnovationLaw innovation_law_from_string(const std::string& s) {
    if (s == "Gaussian" || s == "gaussian") return InnovationLaw::Gaussian;
    if (s == "Rademacher" || s == "rademacher") return InnovationLaw::Rademacher;
    if (s == "CenteredExponential" || s == "exponential") return InnovationLaw::CenteredExponential;
    throw std::domain_error("unknown innovation law '" + s + "' (Gaussian | Rademacher | CenteredExponential)");
}

void LinearProcessSpec::validate() const {
    auto fail = [](const char* field, double v, const char* range) {
        std::ostringstream os;
        os << field << " = " << v << " outside " << range;
        throw std::domain_error(os.str());
    };
    if (!(d > 0.0 && d < 0.5)) fail("d", d, "(0, 0.5)");
    if (!(sigma_eps2 > 0.0)) fail("sigma_eps2", sigma_eps2, "(0, inf)");
    if (family == CoefFamily::PowerLaw && !(C_d > 0.0)) fail("C_d", C_d, "(0, inf)");
}

double LinearProcessSpec::coef_scale() const {
    return family == CoefFamily::FARIMA0d0 ? std::exp(-log_gamma(d)) : C_d;
}

ModelConstants LinearProcessSpec::constants(double alpha) const {
    return ModelConstants{d, alpha, sigma_eps2, coef_scale()};
}

std::uint64_t LinearProcessSpec::hash() const {
    nlohmann::json j = {{"d", d},
                        {"sigma_eps2", sigma_eps2},
                        {"family", to_string(family)},
                        {"C_d", C_d},
                        {"truncation", truncation},
                        {"innovation", to_string(innovation)}};
    return canonical_hash(j);
}

std::vector<double> coefficients(const LinearProcessSpec& spec, std::size_t count) {
    spec.validate();
    std::vector<double> a(count);
    if (count == 0) return a;
    if (spec.family == CoefFamily::FARIMA0d0) {
        a[0] = 1.0;
        for (std::size_t i = 1; i < count; ++i) a[i] = a[i - 1] * ((i - 1.0 + spec.d) / double(i));
    } else {
        a[0] = spec.C_d;
        for (std::size_t i = 1; i < count; ++i) a[i] = spec.C_d * std::pow(double(i), spec.d - 1.0);
    }
    return a;
}

double innovation(const LinearProcessSpec& spec, std::uint64_t seed, std::int64_t t) {
    double v;
    if (spec.innovation == InnovationLaw::Rademacher) {
        const auto b = counter_block(seed, kInnovationStream, sign_block(t));
        const unsigned bit = static_cast<unsigned>(((t % 128) + 128) % 128);
        v = ((b[bit >> 6] >> (bit & 63)) & 1u) ? 1.0 : -1.0;
    } else {
        const auto b = counter_block(seed, kInnovationStream, time_counter(t));
        const double u1 = to_open01(b[0]);
        if (spec.innovation == InnovationLaw::Gaussian) {
            const double u2 = to_open01(b[1]);
            v = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        } else {
            v = -std::log(u1) - 1.0;
        }
    }
    return std::sqrt(spec.sigma_eps2) * v;
}

void innovations(const LinearProcessSpec& spec, std::uint64_t seed, std::int64_t t0, std::size_t count,
                 double* out) {
    const double sd = std::sqrt(spec.sigma_eps2);
    if (spec.innovation == InnovationLaw::Rademacher) {
        const double sign[2] = {-sd, sd};  // table lookup: random bits defeat branch prediction
        std::size_t k = 0;
        while (k < count) {
            const std::int64_t t = t0 + static_cast<std::int64_t>(k);
            const auto b = counter_block(seed, kInnovationStream, sign_block(t));
            unsigned bit = static_cast<unsigned>(((t % 128) + 128) % 128);
            for (; bit < 128 && k < count; ++bit, ++k) out[k] = sign[(b[bit >> 6] >> (bit & 63)) & 1u];
        }
        return;
    }
    for (std::size_t k = 0; k < count; ++k) out[k] = innovation(spec, seed, t0 + static_cast<std::int64_t>(k));
}

double truncated_variance(const LinearProcessSpec& spec, std::uint64_t m) {
    const auto a = coefficients(spec, m + 1);
    double s = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) s += a[i] * a[i];
    return spec.sigma_eps2 * s;
}

SeriesPath generate(const LinearProcessSpec& spec, std::size_t n, std::uint64_t seed, std::uint64_t budget) {
    spec.validate();
    if (n == 0) throw std::domain_error("generate: n must be at least 1");
    const std::uint64_t Mc = spec.truncation ? spec.truncation : 4 * std::uint64_t(n);
    const std::uint64_t need = Mc + 2 * std::uint64_t(n);
    if (need > budget) {
        std::ostringstream os;
        os << "generate: " << need << " values exceed budget " << budget << " (n=" << n << ", M_c=" << Mc << ")";
        throw ResourceError(os.str(), need, budget);
    }
    const auto a = coefficients(spec, Mc + 1);
    std::vector<double> eps(Mc + n);
    innovations(spec, seed, 1 - static_cast<std::int64_t>(Mc), eps.size(), eps.data());
    const std::size_t block = std::max<std::size_t>(next_pow2(Mc + 1), 4096);
    const auto y = overlap_add(eps.data(), eps.size(), a.data(), a.size(), block);

    SeriesPath p;
    p.values.assign(y.begin() + Mc, y.begin() + Mc + n);
    p.spec_hash = spec.hash();
    p.seed = seed;
    p.truncation = Mc;
    double s = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) s += a[i] * a[i];
    p.truncation_bias = exact_acov(0.0, spec) - spec.sigma_eps2 * s;
    return p;
}

std::vector<double> generate_at(const LinearProcessSpec& spec, const std::vector<std::int64_t>& times,
                                std::uint64_t truncation, std::uint64_t seed) {
    spec.validate();
    std::vector<double> out(times.size());
    if (times.empty()) return out;
    if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("generate_at: times must be sorted");
    const std::size_t Mc = truncation;
    const auto a = coefficients(spec, Mc + 1);
    const std::size_t N = next_pow2(2 * (Mc + 1));
    const std::size_t B = N - Mc;  // valid outputs per segment
    std::unique_ptr<CircularConvolver> conv;
    std::vector<double> seg(N), res(N);

    std::size_t k = 0;
    while (k < times.size()) {
        const std::int64_t t0 = times[k];
        std::size_t k_end = k;
        while (k_end < times.size() && times[k_end] < t0 + static_cast<std::int64_t>(B)) ++k_end;
        const std::size_t hits = k_end - k;
        if (hits * (Mc + 1) <= N) {
            // Few points in this span: direct dot products are cheaper.
            for (std::size_t m = k; m < k_end; ++m) {
                innovations(spec, seed, times[m] - static_cast<std::int64_t>(Mc), Mc + 1, seg.data());
                double x = 0.0;
                for (std::size_t i = 0; i <= Mc; ++i) x += a[i] * seg[Mc - i];
                out[m] = x;
            }
        } else {
            if (!conv) conv = std::make_unique<CircularConvolver>(a.data(), a.size(), N);
            // seg[j] = eps_{t0 - Mc + j}; valid outputs at j >= Mc map to t0 - Mc + j.
            innovations(spec, seed, t0 - static_cast<std::int64_t>(Mc), N, seg.data());
            conv->apply(seg.data(), res.data());
            for (std::size_t m = k; m < k_end; ++m) out[m] = res[static_cast<std::size_t>(times[m] - t0) + Mc];
        }
        k = k_end;
    }
    return out;
}

double exact_acov(double h, const LinearProcessSpec& spec) {
    spec.validate();
    h = std::abs(h);
    if (spec.family == CoefFamily::FARIMA0d0) {
        const double d = spec.d;
        return spec.sigma_eps2 * std::exp(farima_log_scale(d) + log_gamma_ratio(h, d, 1 - d));
    }
    const double C = spec.C_d;
    const double a_h = h == 0.0 ? C : C * std::pow(h, spec.d - 1.0);
    return spec.sigma_eps2 * (C * a_h + C * C * powerlaw_cross_sum(spec.d, h));
}

double asymptotic_acov(double h, const ModelConstants& c) {
    if (!(h >= 1.0)) throw std::domain_error("asymptotic_acov: h must be at least 1");
    return tilde_C_d(c) * std::pow(h, 2.0 * c.d - 1.0);
}

double acov_u(double h, const LinearProcessSpec& spec) {
    if (!(h >= 1.0)) throw std::domain_error("acov_u: h must be at least 1");
    return exact_acov(h - 1.0, spec) / std::pow(h, 2.0 * spec.d - 1.0);
}

AcovTable::AcovTable(const LinearProcessSpec& spec, std::size_t table) : spec_(spec) {
    spec.validate();
    tab_.resize(std::max<std::size_t>(table, 1));
    if (spec.family == CoefFamily::FARIMA0d0) {
        const double d = spec.d;
        log_scale_ = farima_log_scale(d) + std::log(spec.sigma_eps2);
        tab_[0] = exact_acov(0.0, spec);
        for (std::size_t h = 1; h < tab_.size(); ++h) tab_[h] = tab_[h - 1] * ((h - 1.0 + d) / (h - d));
    } else {
        for (std::size_t h = 0; h < tab_.size(); ++h) tab_[h] = exact_acov(double(h), spec);
    }
}

double AcovTable::operator()(double h) const {
    h = std::abs(h);
    if (h < static_cast<double>(tab_.size()) && h == std::floor(h)) return tab_[static_cast<std::size_t>(h)];
    if (spec_.family == CoefFamily::FARIMA0d0)
        return std::exp(log_scale_ + log_gamma_ratio(h, spec_.d, 1 - spec_.d));
    return exact_acov(h, spec_);
}

}  // namespace lmr
