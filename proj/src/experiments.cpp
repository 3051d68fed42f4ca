#include "lmr/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "lmr/errors.hpp"
#include "lmr/hash.hpp"
#include "lmr/parallel.hpp"
#include "lmr/random.hpp"
#include "lmr/report.hpp"
#include "lmr/specfun.hpp"
#include "lmr/stats.hpp"

namespace lmr {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sub-seed tags owned by the experiment runners.
constexpr std::uint64_t kTagInverse = 0x1A1;
constexpr std::uint64_t kTagLaplace = 0x1A2;
constexpr std::uint64_t kTagNu = 0x1A3;
constexpr std::uint64_t kTagZ = 0x2B1;
constexpr std::uint64_t kTagMix = 0x2B2;
constexpr std::uint64_t kTagBoot = 0x2B3;
constexpr std::uint64_t kTagPath = 0x2B4;
constexpr std::uint64_t kTagSigma = 0x3C1;
constexpr std::uint64_t kTagProbe = 0x3C2;
constexpr std::uint64_t kTagUi = 0x4D1;
constexpr std::uint64_t kTagHarmonic = 0x4D2;
constexpr std::uint64_t kTagFclt = 0x4D3;
constexpr std::uint64_t kTagLindeberg = 0x5E1;

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string interval(double lo, double hi, bool lo_closed, bool hi_closed) {
    return std::string(lo_closed ? "[" : "(") + (std::isinf(lo) ? "-inf" : fmt(lo)) + ", " +
           (std::isinf(hi) ? "inf" : fmt(hi)) + (hi_closed ? "]" : ")");
}

const json& empty_object() {
    static const json e = json::object();
    return e;
}

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "config" : path_, "expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    const json& raw(const std::string& key) const { return has(key) ? j_.at(key) : empty_object(); }

    Reader sub(const std::string& key) const { return Reader(raw(key), field(key)); }

    double real(const std::string& key, double def) const {
        if (!has(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(field(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(field(key), "expected a finite number");
        return x;
    }

    double real_in(const std::string& key, double def, double lo, double hi, bool lo_closed, bool hi_closed) const {
        const double x = real(key, def);
        check_range(field(key), x, lo, hi, lo_closed, hi_closed);
        return x;
    }

    std::uint64_t integer(const std::string& key, std::uint64_t def, std::uint64_t lo, std::uint64_t hi) const {
        if (!has(key)) return def;
        return to_integer(j_.at(key), field(key), lo, hi);
    }

    std::string text(const std::string& key, const std::string& def) const {
        if (!has(key)) return def;
        if (!j_.at(key).is_string()) throw ConfigError(field(key), "expected a string");
        return j_.at(key).get<std::string>();
    }

    std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& options) const {
        const std::string s = text(key, def);
        if (std::find(options.begin(), options.end(), s) == options.end()) {
            std::string all;
            for (const auto& o : options) all += (all.empty() ? "" : ", ") + o;
            throw ConfigError(field(key), "'" + s + "' is not one of " + all);
        }
        return s;
    }

    bool flag(const std::string& key, bool def) const {
        if (!has(key)) return def;
        if (!j_.at(key).is_boolean()) throw ConfigError(field(key), "expected true or false");
        return j_.at(key).get<bool>();
    }

    std::vector<double> reals(const std::string& key, std::vector<double> def, double lo, double hi, bool lo_closed,
                              bool hi_closed) const {
        if (has(key)) {
            const json& v = j_.at(key);
            if (!v.is_array() || v.empty()) throw ConfigError(field(key), "expected a non-empty array of numbers");
            def.clear();
            for (std::size_t i = 0; i < v.size(); ++i) {
                const std::string f = field(key) + "[" + std::to_string(i) + "]";
                if (!v[i].is_number()) throw ConfigError(f, "expected a number");
                def.push_back(v[i].get<double>());
            }
        }
        for (std::size_t i = 0; i < def.size(); ++i)
            check_range(field(key) + "[" + std::to_string(i) + "]", def[i], lo, hi, lo_closed, hi_closed);
        return def;
    }

    std::vector<std::uint64_t> integers(const std::string& key, std::vector<std::uint64_t> def, std::uint64_t lo,
                                        std::uint64_t hi) const {
        if (!has(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_array() || v.empty()) throw ConfigError(field(key), "expected a non-empty array of integers");
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(to_integer(v[i], field(key) + "[" + std::to_string(i) + "]", lo, hi));
        return out;
    }

private:
    static void check_range(const std::string& f, double x, double lo, double hi, bool lo_closed, bool hi_closed) {
        const bool ok = (lo_closed ? x >= lo : x > lo) && (hi_closed ? x <= hi : x < hi);
        if (!ok) throw ConfigError(f, fmt(x) + " outside " + interval(lo, hi, lo_closed, hi_closed));
    }

    static std::uint64_t to_integer(const json& v, const std::string& f, std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t x = 0;
        if (v.is_number_unsigned()) {
            x = v.get<std::uint64_t>();
        } else if (v.is_number_integer()) {
            const auto i = v.get<std::int64_t>();
            if (i < 0)
                throw ConfigError(f, std::to_string(i) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            x = static_cast<std::uint64_t>(i);
        } else if (v.is_number_float()) {
            const double d = v.get<double>();
            if (!(d >= 0.0 && d < 1.8e19 && std::floor(d) == d)) throw ConfigError(f, "expected a nonnegative integer");
            x = static_cast<std::uint64_t>(d);
        } else {
            throw ConfigError(f, "expected a nonnegative integer");
        }
        if (x < lo || x > hi)
            throw ConfigError(f, std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    const json& j_;
    std::string path_;
};

constexpr std::uint64_t kMaxU64 = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint64_t kMaxReps = 100'000'000;

std::uint64_t read_seed(const Reader& r) { return r.integer("seed", 1, 0, kMaxU64); }

RenewalLaw law_or_default(const Reader& r, const std::string& key, const json& def) {
    return law_from_json(r.has(key) ? r.raw(key) : def, r.field(key));
}

LinearProcessSpec process_or_default(const Reader& r, double d_default = 0.3) {
    json j = r.has("process") ? r.raw("process") : json::object();
    if (j.is_object() && !j.contains("d")) j["d"] = d_default;
    return process_from_json(j, r.field("process"));
}

double heavy_alpha(const RenewalLaw& law, const std::string& field, bool allow_one) {
    if (law.finite_mean()) throw ConfigError(field, law.name() + " has finite mean; an infinite-mean law is required");
    const double a = law.alpha();
    if (!allow_one && a >= 1.0) throw ConfigError(field, "alpha = 1 is not allowed here; need alpha < 1");
    return a;
}

json estimate_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }
json ks_json(const KsResult& k) { return {{"statistic", k.statistic}, {"p_value", k.p_value}}; }

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
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

// Standard error of the sample variance, sqrt((m4 - s^4) / n).
double variance_se(const std::vector<double>& v) {
    const double n = double(v.size());
    double m = 0;
    for (double x : v) m += x;
    m /= n;
    double m2 = 0, m4 = 0;
    for (double x : v) {
        const double c = (x - m) * (x - m);
        m2 += c;
        m4 += c * c;
    }
    m2 /= n;
    m4 /= n;
    return std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
}

std::vector<double> z_values(const std::vector<ZSample>& zs) {
    std::vector<double> v(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) v[i] = zs[i].value;
    return v;
}

json z_summary(const std::vector<double>& Z) {
    double m2 = 0;
    for (double z : Z) m2 += z * z;
    m2 /= double(Z.size());
    return {{"mean", estimate_json(mean_se(Z))},
            {"variance", {{"value", sample_variance(Z)}, {"se", variance_se(Z)}}},
            {"second_moment", m2},
            {"nvm_excess_kurtosis", 3.0 * (m2 - 1.0)},
            {"paths", Z.size()}};
}

std::vector<std::pair<double, double>> normal_curve() {
    std::vector<std::pair<double, double>> c;
    for (int i = 0; i <= 200; ++i) {
        const double x = -6.0 + 0.06 * i;
        c.emplace_back(x, std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi));
    }
    return c;
}

std::vector<std::pair<double, double>> nvm_curve(const std::vector<double>& Z) {
    std::vector<std::pair<double, double>> c;
    for (int i = 0; i <= 200; ++i) {
        const double x = -6.0 + 0.06 * i;
        double s = 0;
        for (double z : Z) s += std::exp(-0.5 * x * x / z) / std::sqrt(z);
        c.emplace_back(x, s / (double(Z.size()) * std::sqrt(2.0 * std::numbers::pi)));
    }
    return c;
}

// ---------------------------------------------------------------- regime

struct Experiment {
    json results;
    std::string csv;
    std::vector<std::pair<std::string, std::string>> svgs;
};

Experiment run_regime(const Reader& r, int) {
    const auto alphas = r.reals("alphas", {0.2, 0.6, 1.0}, 0.0, 1.0, false, true);
    const auto ds = r.reals("ds", {0.1, 0.25, 0.4}, 0.0, 0.5, false, false);
    const bool finite = r.flag("finite_mean", true);

    Experiment e;
    CsvWriter csv({"alpha", "d", "regime", "reason"});
    json table = json::array();
    std::vector<RegimePoint> pts;
    for (double a : alphas)
        for (double d : ds) {
            const auto lab = classify_regime(a, d);
            csv.row({csv_number(a), csv_number(d), to_string(lab.regime), to_string(lab.reason)});
            table.push_back({{"alpha", a}, {"d", d}, {"regime", to_string(lab.regime)}, {"reason", to_string(lab.reason)}});
            pts.push_back({a, d, lab.regime == Regime::NVM});
        }
    if (finite)
        for (double d : ds) {
            const auto lab = classify_regime(std::nullopt, d);
            csv.row({"finite-mean", csv_number(d), to_string(lab.regime), to_string(lab.reason)});
            table.push_back({{"alpha", nullptr}, {"d", d}, {"regime", to_string(lab.regime)}, {"reason", to_string(lab.reason)}});
        }
    e.results = {{"table", table}};
    e.csv = csv.str();
    e.svgs.emplace_back("regime_map", svg_regime_map(pts));
    return e;
}

// ---------------------------------------------------------------- sample-z

struct ZConfig {
    double alpha, d;
    std::size_t M, paths, refine;
};

ZConfig read_z(const Reader& r, double alpha_default, double d_default, bool alpha_from_law) {
    ZConfig c{};
    c.alpha = alpha_from_law ? alpha_default : r.real_in("alpha", alpha_default, 0.0, 1.0, false, false);
    c.d = alpha_from_law ? d_default : r.real_in("d", d_default, 0.0, 0.5, false, false);
    if (!(c.alpha > 1.0 - 2.0 * c.d))
        throw ConfigError(alpha_from_law ? "law" : r.field("alpha"),
                          "alpha = " + fmt(c.alpha) + " must exceed 1 - 2d = " + fmt(1.0 - 2.0 * c.d));
    c.M = r.integer("M", 4096, 2, 1u << 22);
    c.paths = r.integer("paths", 10000, 2, kMaxReps);
    c.refine = r.integer("refine", 1, 1, 64);
    return c;
}

Experiment run_sample_z(const Reader& r, int workers) {
    const std::uint64_t seed = read_seed(r);
    const ZConfig c = read_z(r, 0.7, 0.3, false);
    const auto zs = sample_Z(c.alpha, c.d, c.M, c.paths, derive_seed(seed, kTagZ), workers, c.refine);
    const auto Z = z_values(zs);

    Experiment e;
    e.results = z_summary(Z);
    e.results["alpha"] = c.alpha;
    e.results["d"] = c.d;
    e.results["M"] = c.M;
    CsvWriter csv({"value", "alpha", "d", "M", "seed"});
    for (const auto& z : zs)
        csv.row({csv_number(z.value), csv_number(z.alpha), csv_number(z.d), std::to_string(z.M), std::to_string(z.seed)});
    e.csv = csv.str();
    e.svgs.emplace_back("z_hist", svg_histogram(Z, "Z(" + fmt(c.alpha) + ", " + fmt(c.d) + ")"));
    return e;
}

// ---------------------------------------------------------------- moments

Experiment run_moments(const Reader& r, int workers) {
    const std::uint64_t seed = read_seed(r);
    const Reader inv = r.sub("inverse");
    const auto inv_alphas = inv.reals("alphas", {0.5, 0.7, 0.9}, 0.0, 1.0, false, false);
    const auto inv_a = inv.reals("a", {0.3, 0.65}, 0.0, 50.0, false, true);
    const std::size_t inv_draws = inv.integer("draws", 1'000'000, 2, kMaxReps);
    const Reader lap = r.sub("laplace");
    const auto lap_alphas = lap.reals("alphas", {0.4, 0.6, 0.8}, 0.0, 1.0, false, false);
    const auto lap_s = lap.reals("s", {0.5, 1.0, 2.0}, 0.0, 1e6, false, true);
    const std::size_t lap_draws = lap.integer("draws", 1'000'000, 2, kMaxReps);
    const Reader nu = r.sub("nu");
    const double nu_alpha = nu.real_in("alpha", 0.8, 0.0, 1.0, false, false);
    const double nu_d = nu.real_in("d", 0.35, 0.0, 0.5, false, false);
    if (!(nu_alpha > 1.0 - 2.0 * nu_d))
        throw ConfigError(nu.field("alpha"), "alpha = " + fmt(nu_alpha) + " must exceed 1 - 2d = " + fmt(1.0 - 2.0 * nu_d));
    const auto nu_k = nu.integers("k", {1, 2, 3}, 1, 8);
    const std::size_t nu_M = nu.integer("M", 4096, 2, 1u << 22);
    const std::size_t nu_paths = nu.integer("paths", 10000, 2, kMaxReps);

    Experiment e;
    CsvWriter csv({"section", "alpha", "param", "estimate", "se", "reference", "z_score"});
    json inv_rows = json::array(), lap_rows = json::array(), nu_rows = json::array();

    std::size_t combo = 0;
    for (double a : inv_alphas)
        for (double p : inv_a) {
            const Estimate est = stable_mc({a, 1.0}, inv_draws, stream_seed(seed, kTagInverse, combo++),
                                           [p](double L) { return std::pow(L, -p); }, workers);
            const double ref = inverse_stable_moment(p, a);
            const double z = (est.value - ref) / est.se;
            csv.row({"inverse", csv_number(a), csv_number(p), csv_number(est.value), csv_number(est.se), csv_number(ref),
                     csv_number(z)});
            inv_rows.push_back({{"alpha", a}, {"a", p}, {"estimate", estimate_json(est)}, {"reference", ref},
                                {"z_score", z}, {"relative_error", std::abs(est.value / ref - 1.0)}});
        }
    combo = 0;
    for (double a : lap_alphas)
        for (double s : lap_s) {
            const Estimate est = stable_mc({a, 1.0}, lap_draws, stream_seed(seed, kTagLaplace, combo++),
                                           [s](double L) { return std::exp(-s * L); }, workers);
            const double ref = std::exp(-std::pow(s, a));
            const double z = (est.value - ref) / est.se;
            csv.row({"laplace", csv_number(a), csv_number(s), csv_number(est.value), csv_number(est.se), csv_number(ref),
                     csv_number(z)});
            lap_rows.push_back({{"alpha", a}, {"s", s}, {"estimate", estimate_json(est)}, {"reference", ref}, {"z_score", z}});
        }
    const double rr = 1.0 - 2.0 * nu_d;
    const double q = rr / nu_alpha;
    for (std::size_t i = 0; i < nu_k.size(); ++i) {
        const int k = static_cast<int>(nu_k[i]);
        const auto m = nu_k_estimate(nu_alpha, nu_d, k, nu_M, nu_paths, stream_seed(seed, kTagNu, i), workers);
        const double ism = inverse_stable_moment(rr * k, nu_alpha);
        const double bound = std::pow(1.0 / (nu_d * (2.0 * nu_d + 1.0)), k) * ism;
        const double corrected = std::pow(2.0 / ((1.0 - q) * (2.0 - q)), k) * ism;
        csv.row({"nu", csv_number(nu_alpha), std::to_string(k), csv_number(m.value), csv_number(m.se),
                 csv_number(bound), csv_number((m.value - bound) / m.se)});
        nu_rows.push_back({{"k", k},
                           {"estimate", {{"value", m.value}, {"se", m.se}}},
                           {"infinite_variance_warning", m.infinite_variance_warning},
                           {"bound", bound},
                           {"within_bound", m.value <= bound + 3.0 * m.se},
                           {"cell_bound", corrected},
                           {"within_cell_bound", m.value <= corrected + 3.0 * m.se}});
    }
    e.results = {{"inverse", inv_rows},
                 {"laplace", lap_rows},
                 {"nu", {{"alpha", nu_alpha}, {"d", nu_d}, {"M", nu_M}, {"paths", nu_paths}, {"rows", nu_rows}}}};
    e.csv = csv.str();
    return e;
}

// ---------------------------------------------------------------- cov-verify

Experiment run_cov_verify(const Reader& r, int workers) {
    const std::uint64_t seed = read_seed(r);
    const RenewalLaw law = law_or_default(r, "law", {{"law", "DiscretePareto"}, {"alpha", 0.6}});
    const double alpha = heavy_alpha(law, r.field("law"), false);
    const LinearProcessSpec spec = process_or_default(r);
    const auto lags = r.integers("lags", {64, 128, 256, 512, 1024, 2048, 4096}, 1, 1u << 24);
    const std::size_t reps = r.integer("reps", 10000, 2, kMaxReps);
    const Reader pr = r.sub("probe");
    const RenewalLaw probe_law = pr.has("law") ? law_from_json(pr.raw("law"), pr.field("law")) : law;
    const double probe_alpha = heavy_alpha(probe_law, pr.field("law"), false);
    const std::size_t probe_n = pr.integer("n", 100000, 2, 1u << 26);
    const std::size_t probe_reps = pr.integer("reps", 2000, 2, kMaxReps);
    const double probe_r = pr.real_in("r", probe_alpha / 2.0, 0.0, probe_alpha, false, false);

    std::vector<std::size_t> lv(lags.begin(), lags.end());
    const auto tab = sigma_Y_mc(law, spec, lv, reps, derive_seed(seed, kTagSigma), workers);
    const auto probe = fclt_scale_probe(probe_law, probe_n, probe_reps, probe_r, derive_seed(seed, kTagProbe), workers);

    Experiment e;
    CsvWriter csv({"h", "sigma_mc", "se", "asymptotic_kappa1", "asymptotic_selected", "ratio_selected"});
    std::vector<double> lx, ly, hs, mc, as;
    for (std::size_t i = 0; i < lv.size(); ++i) {
        const double h = double(lv[i]);
        const double a1 = sigma_Y_asymptotic(law, spec, h, 1.0);
        const double asel = sigma_Y_asymptotic(law, spec, h, probe.selected);
        const auto& s = tab.sigma[i];
        csv.row({std::to_string(lv[i]), csv_number(s.value), csv_number(s.se), csv_number(a1), csv_number(asel),
                 csv_number(s.value / asel)});
        if (s.value > 0) {
            lx.push_back(std::log(h));
            ly.push_back(std::log(s.value));
        }
        hs.push_back(h);
        mc.push_back(s.value);
        as.push_back(asel);
    }
    const double slope = ols_slope(lx, ly);
    const double target = (2.0 * spec.d - 1.0) / alpha;
    const auto& last = tab.sigma.back();
    const double last_asym = sigma_Y_asymptotic(law, spec, double(lv.back()), probe.selected);
    e.results = {{"law", law.to_json()},
                 {"d", spec.d},
                 {"slope", slope},
                 {"target_slope", target},
                 {"slope_error", slope - target},
                 {"probe",
                  {{"law", probe_law.to_json()},
                   {"n", probe_n},
                   {"r", probe.r},
                   {"kappa", {{"value", probe.kappa}, {"se", probe.se}}},
                   {"selected_kappa", probe.selected},
                   {"gamma_convention", probe.gamma_convention}}},
                 {"ratio_at_max_lag", last.value / last_asym},
                 {"ratio_se", last.se / last_asym},
                 {"reps", reps}};
    e.csv = csv.str();
    e.svgs.emplace_back("sigma_loglog", svg_loglog({{"MC", hs, mc}, {"asymptotic", hs, as}}, "sigma_Y(h)", "h", "sigma_Y"));
    return e;
}

// ---------------------------------------------------------------- clt

Experiment run_clt_conditional(const Reader& r, int workers, std::uint64_t seed, const RenewalLaw& law,
                               const LinearProcessSpec& spec, std::size_t n, std::size_t reps,
                               std::uint64_t window_cap) {
    const std::size_t max_redraws = r.integer("max_redraws", 1000, 1, 1'000'000);
    // The profile window spans about 2 T_n and the FFT doubles it again.
    const std::uint64_t t_cap = window_cap / 4;
    RenewalPath path;
    std::size_t attempt = 0;
    for (;; ++attempt) {
        if (attempt >= max_redraws)
            throw ResourceError("clt: no renewal path with 4 T_n <= window_cap in " + std::to_string(max_redraws) +
                                    " draws",
                                static_cast<std::uint64_t>(path.T.back()), t_cap);
        path = sample_path(law, n, stream_seed(seed, kTagPath, attempt), true);
        if (path.T.back() <= double(t_cap)) break;
    }
    const auto batch = conditional_S_prime(path, spec, reps, derive_seed(seed, kTagMix), workers, window_cap);
    const auto& p = batch.profile;

    Experiment e;
    e.results = {{"mode", "conditional"},
                 {"law", law.to_json()},
                 {"n", n},
                 {"T_n", path.T.back()},
                 {"path_seed", path.seed},
                 {"redraws", attempt},
                 {"variance", sample_variance(batch.S)},
                 {"ks_normal", ks_json(ks_one_sample_normal(batch.S))},
                 {"lindeberg_ratio", p.lindeberg_ratio},
                 {"tail_fraction", p.tail_sum_sq / p.d2},
                 {"identity_rel_error", p.identity_rel_error}};
    CsvWriter csv({"replicate", "S"});
    for (std::size_t i = 0; i < batch.S.size(); ++i) csv.row({std::to_string(i), csv_number(batch.S[i])});
    e.csv = csv.str();
    e.svgs.emplace_back("s_hist", svg_histogram(batch.S, "S'_n over innovations, fixed path", 50, normal_curve()));
    return e;
}

Experiment run_clt(const Reader& r, int workers) {
    const std::uint64_t seed = read_seed(r);
    const RenewalLaw law = law_or_default(r, "law", {{"law", "Geometric"}, {"q", 0.5}});
    const LinearProcessSpec spec = process_or_default(r);
    const std::size_t n = r.integer("n", 8192, 1, 1u << 24);
    const std::size_t reps = r.integer("replicates", 2000, 20, kMaxReps);
    const std::string mode = r.choice("mode", "unconditional", {"unconditional", "conditional"});
    SnOptions opt;
    opt.route = sn_route_from_string(r.choice("route", "auto", {"auto", "linear", "conditional-gaussian"}));
    opt.var_reps = r.integer("var_reps", 4000, 2, kMaxReps);
    opt.window_cap = r.integer("window_cap", kDefaultWindowCap, 16, std::uint64_t(1) << 34);
    opt.workers = workers;
    const auto label = classify_regime(law, spec.d);
    const Reader zr = r.sub("z");
    std::optional<ZConfig> zc;
    if (label.regime == Regime::NVM) zc = read_z(zr, law.alpha(), spec.d, true);
    const std::size_t boot = r.integer("boot", 500, 0, 100000);

    if (mode == "conditional") {
        if (law.finite_mean()) throw ConfigError(r.field("law"), "conditional mode needs an infinite-mean law");
        return run_clt_conditional(r, workers, seed, law, spec, n, reps, opt.window_cap);
    }

    const auto batch = S_n_statistic(spec, law, n, reps, seed, opt);
    std::vector<double> S(reps), R(reps), ids, lin;
    for (std::size_t i = 0; i < reps; ++i) {
        S[i] = batch.reps[i].S;
        R[i] = batch.reps[i].R;
        if (batch.route == SnRoute::Linear) {
            ids.push_back(batch.reps[i].identity_rel_error);
            lin.push_back(batch.reps[i].lindeberg_ratio);
        }
    }
    const auto kurt = excess_kurtosis(S);
    const double r_mean = mean_se(R).value;

    Experiment e;
    e.results = {{"mode", "unconditional"},
                 {"law", law.to_json()},
                 {"d", spec.d},
                 {"n", n},
                 {"replicates", reps},
                 {"regime", to_string(label.regime)},
                 {"reason", to_string(label.reason)},
                 {"route", to_string(batch.route)},
                 {"variance_sum", estimate_json(batch.variance)},
                 {"S_mean", estimate_json(mean_se(S))},
                 {"S_variance", sample_variance(S)},
                 {"ks_normal", ks_json(ks_one_sample_normal(S))},
                 {"excess_kurtosis", {{"value", kurt.excess}, {"se", kurt.se}}},
                 {"R_mean", r_mean},
                 {"R_sd", std::sqrt(sample_variance(R))}};
    if (!ids.empty()) {
        e.results["identity_max_rel_error"] = *std::max_element(ids.begin(), ids.end());
        e.results["lindeberg_median"] = median(lin);
    }
    auto curve = normal_curve();
    if (zc) {
        const auto Z = z_values(sample_Z(zc->alpha, zc->d, zc->M, zc->paths, derive_seed(seed, kTagZ), workers, zc->refine));
        std::vector<double> mix(Z.size());
        Rng rng(derive_seed(seed, kTagMix), 0);
        for (std::size_t i = 0; i < Z.size(); ++i) mix[i] = std::sqrt(Z[i]) * rng.normal();
        const json zs = z_summary(Z);
        const double pred = zs["nvm_excess_kurtosis"].get<double>();
        e.results["z"] = zs;
        e.results["ks_vs_mixture_sample"] = ks_json(ks_two_sample(S, mix));
        e.results["ks_vs_mixture_cdf"] = ks_json(ks_against_nvm(S, Z, boot, derive_seed(seed, kTagBoot), workers));
        e.results["ks_R_vs_Z"] = ks_json(ks_two_sample(R, Z));
        e.results["kurtosis_z_score"] = (kurt.excess - pred) / kurt.se;
        curve = nvm_curve(Z);
    }
    CsvWriter csv({"replicate", "seed", "T_n", "S", "R", "V_cond", "identity_rel_error", "lindeberg_ratio"});
    for (std::size_t i = 0; i < reps; ++i) {
        const auto& x = batch.reps[i];
        csv.row({std::to_string(i), std::to_string(x.seed), csv_number(x.T_n), csv_number(x.S), csv_number(x.R),
                 csv_number(x.V_cond), csv_number(x.identity_rel_error), csv_number(x.lindeberg_ratio)});
    }
    e.csv = csv.str();
    e.svgs.emplace_back("s_hist", svg_histogram(S, "S_n, " + law.name() + ", d = " + fmt(spec.d), 50, curve));
    return e;
}

// ---------------------------------------------------------------- lindeberg

Experiment run_lindeberg(const Reader& r, int workers) {
    const std::uint64_t seed = read_seed(r);
    const RenewalLaw law = law_or_default(r, "law", {{"law", "Geometric"}, {"q", 0.5}});
    const LinearProcessSpec spec = process_or_default(r);
    const auto ns = r.integers("ns", {1024, 4096, 16384}, 1, 1u << 22);
    const std::size_t paths = r.integer("paths", 50, 1, 1'000'000);
    const std::uint64_t window_cap = r.integer("window_cap", kDefaultWindowCap, 16, std::uint64_t(1) << 34);
    const std::size_t H = r.integer("positivity_lags", 256, 1, 1u << 20);
    const std::size_t sigma_reps = r.integer("sigma_reps", 2000, 2, kMaxReps);

    struct Row {
        double T_n, ratio, id;
        std::int64_t argmax;
        std::uint64_t seed;
    };
    std::vector<std::vector<Row>> rows(ns.size(), std::vector<Row>(paths));
    const std::size_t total = ns.size() * paths;
    parallel_for(total, workers, [&](std::size_t t) {
        const std::size_t k = t / paths, i = t % paths;
        const std::uint64_t s = stream_seed(derive_seed(seed, kTagLindeberg), ns[k], i);
        const auto path = sample_path(law, ns[k], s, true);
        const auto p = coefficient_profile(path, spec, 0, window_cap, true);
        rows[k][i] = {path.T.back(), p.lindeberg_ratio, p.identity_rel_error, p.argmax_j, s};
    });

    std::vector<std::size_t> lags(H + 1);
    for (std::size_t h = 0; h <= H; ++h) lags[h] = h;
    const auto sig = sigma_Y_mc(law, spec, lags, sigma_reps, derive_seed(seed, kTagSigma), workers);
    std::vector<double> sv;
    for (const auto& s : sig.sigma) sv.push_back(s.value);
    const auto pw = positivity_window(sv);

    Experiment e;
    CsvWriter csv({"n", "path", "seed", "T_n", "lindeberg_ratio", "identity_rel_error", "argmax_j"});
    json meds = json::array();
    std::vector<double> nx, my;
    bool decreasing = true;
    double prev = kInf, id_max = 0;
    for (std::size_t k = 0; k < ns.size(); ++k) {
        std::vector<double> rv;
        for (std::size_t i = 0; i < paths; ++i) {
            const auto& x = rows[k][i];
            rv.push_back(x.ratio);
            id_max = std::max(id_max, x.id);
            csv.row({std::to_string(ns[k]), std::to_string(i), std::to_string(x.seed), csv_number(x.T_n),
                     csv_number(x.ratio), csv_number(x.id), std::to_string(x.argmax)});
        }
        const double m = median(rv);
        meds.push_back({{"n", ns[k]}, {"median_ratio", m}});
        decreasing = decreasing && m < prev;
        prev = m;
        nx.push_back(double(ns[k]));
        my.push_back(m);
    }
    e.results = {{"law", law.to_json()},
                 {"d", spec.d},
                 {"medians", meds},
                 {"strictly_decreasing", decreasing},
                 {"final_median", prev},
                 {"identity_max_rel_error", id_max},
                 {"positivity_window",
                  {{"found", pw.found}, {"m", pw.m}, {"positive_from", pw.positive_from}, {"lags", H}}}};
    e.csv = csv.str();
    e.svgs.emplace_back("lindeberg_loglog", svg_loglog({{"median ratio", nx, my}}, "Lindeberg ratio", "n", "ratio"));
    return e;
}

// ---------------------------------------------------------------- probes

struct UiSpec {
    UiProbe probe;
    RenewalLaw law;
    double r;
};

Experiment run_probes(const Reader& r, int workers) {
    const std::uint64_t seed = read_seed(r);
    std::vector<std::string> run = {"ui", "harmonic", "fclt"};
    if (r.has("run")) {
        const json& v = r.raw("run");
        if (!v.is_array()) throw ConfigError(r.field("run"), "expected an array of section names");
        run.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string f = r.field("run") + "[" + std::to_string(i) + "]";
            if (!v[i].is_string()) throw ConfigError(f, "expected a string");
            const auto s = v[i].get<std::string>();
            if (s != "ui" && s != "harmonic" && s != "fclt") throw ConfigError(f, "'" + s + "' is not one of ui, harmonic, fclt");
            run.push_back(s);
        }
    }
    auto wants = [&](const char* s) { return std::find(run.begin(), run.end(), s) != run.end(); };

    const Reader ur = r.sub("ui");
    std::vector<std::uint64_t> ns_def;
    for (int k = 8; k <= 16; ++k) ns_def.push_back(std::uint64_t(1) << k);
    const auto ns = ur.integers("ns", ns_def, 2, 1u << 24);
    const std::size_t ui_reps = ur.integer("reps", 4000, 2, kMaxReps);
    json probes_def = json::array({{{"probe", "max-gap"}, {"law", {{"law", "ContinuousPareto"}, {"alpha", 0.5}}}, {"r", 1.0}},
                                   {{"probe", "double-average"}, {"law", {{"law", "ContinuousPareto"}, {"alpha", 0.5}}}, {"r", 0.25}},
                                   {{"probe", "alpha-one-sum"}, {"law", {{"law", "ReciprocalUniform"}}}, {"r", 2.0}},
                                   {{"probe", "alpha-one-double-average"}, {"law", {{"law", "ReciprocalUniform"}}}, {"r", 0.5}}});
    const json& pj = ur.has("probes") ? ur.raw("probes") : probes_def;
    if (!pj.is_array()) throw ConfigError(ur.field("probes"), "expected an array");
    std::vector<UiSpec> uis;
    for (std::size_t i = 0; i < pj.size(); ++i) {
        const Reader pr(pj[i], ur.field("probes") + "[" + std::to_string(i) + "]");
        const auto name = pr.choice("probe", "max-gap", {"max-gap", "double-average", "alpha-one-sum", "alpha-one-double-average"});
        const UiProbe kind = ui_probe_from_string(name);
        const RenewalLaw law = law_or_default(pr, "law", {{"law", "ContinuousPareto"}, {"alpha", 0.5}});
        const bool alpha_one = kind == UiProbe::AlphaOneSum || kind == UiProbe::AlphaOneDoubleAverage;
        const double a = heavy_alpha(law, pr.field("law"), alpha_one);
        if (alpha_one && a != 1.0) throw ConfigError(pr.field("law"), name + " needs a law with alpha = 1");
        const bool bounded = kind == UiProbe::DoubleAverage || kind == UiProbe::AlphaOneDoubleAverage;
        const double rr = bounded ? pr.real_in("r", a / 2.0, 0.0, a, false, false) : pr.real_in("r", 1.0, 0.0, kInf, false, false);
        uis.push_back({kind, law, rr});
    }
    const Reader hr = r.sub("harmonic");
    const std::size_t h_n = hr.integer("n", 1'000'000, 2, 1u << 30);
    const std::size_t h_reps = hr.integer("reps", 10000, 2, kMaxReps);
    const Reader fr = r.sub("fclt");
    const RenewalLaw f_law = law_or_default(fr, "law", {{"law", "ContinuousPareto"}, {"alpha", 0.5}});
    const double f_alpha = wants("fclt") ? heavy_alpha(f_law, fr.field("law"), false) : 0.5;
    const std::size_t f_n = fr.integer("n", 100000, 2, 1u << 26);
    const std::size_t f_reps = fr.integer("reps", 2000, 2, kMaxReps);
    const double f_r = fr.real_in("r", f_alpha / 2.0, 0.0, f_alpha, false, false);

    Experiment e;
    CsvWriter csv({"section", "name", "n", "value", "se"});
    json out = json::object();
    if (wants("ui")) {
        json arr = json::array();
        std::vector<Series> series;
        std::vector<std::size_t> nv(ns.begin(), ns.end());
        for (std::size_t i = 0; i < uis.size(); ++i) {
            const auto res = ui_probe(uis[i].law, uis[i].probe, uis[i].r, nv, ui_reps, stream_seed(seed, kTagUi, i), workers);
            Series s{to_string(res.probe), {}, {}};
            json rows = json::array();
            for (const auto& row : res.rows) {
                csv.row({"ui", to_string(res.probe), std::to_string(row.n), csv_number(row.value.value), csv_number(row.value.se)});
                rows.push_back({{"n", row.n}, {"value", row.value.value}, {"se", row.value.se}});
                s.x.push_back(double(row.n));
                s.y.push_back(row.value.value);
            }
            series.push_back(std::move(s));
            arr.push_back({{"probe", to_string(res.probe)},
                           {"law", uis[i].law.to_json()},
                           {"r", res.r},
                           {"max_value", res.max_value},
                           {"slope", res.slope},
                           {"rows", rows}});
        }
        out["ui"] = {{"reps", ui_reps}, {"probes", arr}};
        e.svgs.emplace_back("ui_loglog", svg_loglog(series, "Uniform-integrability probes", "n", "estimate"));
    }
    if (wants("harmonic")) {
        const auto d = harmonic_mean_probe(h_n, h_reps, derive_seed(seed, kTagHarmonic), workers, HarmonicForm::Direct);
        const auto rn = harmonic_mean_probe(h_n, h_reps, derive_seed(seed, kTagHarmonic + 1), workers, HarmonicForm::Renewal);
        csv.row({"harmonic", "direct", std::to_string(h_n), csv_number(d.value), csv_number(d.se)});
        csv.row({"harmonic", "renewal", std::to_string(h_n), csv_number(rn.value), csv_number(rn.se)});
        const double diff = d.value - rn.value, dse = std::hypot(d.se, rn.se);
        out["harmonic"] = {{"n", h_n},
                           {"reps", h_reps},
                           {"direct", estimate_json(d)},
                           {"renewal", estimate_json(rn)},
                           {"difference_z", diff / dse}};
    }
    if (wants("fclt")) {
        const auto p = fclt_scale_probe(f_law, f_n, f_reps, f_r, derive_seed(seed, kTagFclt), workers);
        csv.row({"fclt", "kappa", std::to_string(f_n), csv_number(p.kappa), csv_number(p.se)});
        out["fclt"] = {{"law", f_law.to_json()},
                       {"n", f_n},
                       {"r", p.r},
                       {"moment", estimate_json(p.moment)},
                       {"kappa", {{"value", p.kappa}, {"se", p.se}}},
                       {"candidates", {1.0, gamma_fn(1.0 - f_alpha)}},
                       {"selected_kappa", p.selected},
                       {"gamma_convention", p.gamma_convention}};
    }
    e.results = out;
    e.csv = csv.str();
    return e;
}

using Runner = Experiment (*)(const Reader&, int);

const std::vector<std::pair<std::string, Runner>>& runners() {
    static const std::vector<std::pair<std::string, Runner>> r = {
        {"cov-verify", run_cov_verify}, {"clt", run_clt},           {"sample-z", run_sample_z}, {"moments", run_moments},
        {"probes", run_probes},         {"lindeberg", run_lindeberg}, {"regime", run_regime}};
    return r;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [n, f] : runners()) v.push_back(n);
        return v;
    }();
    return names;
}

std::string library_version() { return "0.1.0"; }

LinearProcessSpec process_from_json(const json& j, const std::string& field) {
    const Reader r(j, field);
    LinearProcessSpec s;
    s.d = r.real_in("d", 0.3, 0.0, 0.5, false, false);
    s.sigma_eps2 = r.real_in("sigma_eps2", 1.0, 0.0, kInf, false, false);
    s.family = coef_family_from_string(r.choice("family", "FARIMA0d0", {"FARIMA0d0", "PowerLaw"}));
    s.C_d = r.real_in("C_d", 1.0, 0.0, kInf, false, false);
    s.truncation = r.integer("truncation", 0, 0, std::uint64_t(1) << 34);
    s.innovation = innovation_law_from_string(
        r.choice("innovation", "Gaussian", {"Gaussian", "Rademacher", "CenteredExponential"}));
    return s;
}

RenewalLaw law_from_json(const json& j, const std::string& field) {
    const Reader r(j, field);
    if (!r.has("law")) throw ConfigError(r.field("law"), "missing gap law name");
    const auto name = r.choice("law", "", {"DiscretePareto", "ContinuousPareto", "ReciprocalUniform", "LogPerturbedPareto",
                                           "Geometric", "Deterministic"});
    auto alpha = [&] {
        if (!r.has("alpha")) throw ConfigError(r.field("alpha"), "missing; required by " + name);
        return r.real_in("alpha", 0.5, 0.0, 1.0, false, true);
    };
    if (name == "DiscretePareto") return RenewalLaw::discrete_pareto(alpha());
    if (name == "ContinuousPareto") return RenewalLaw::continuous_pareto(alpha());
    if (name == "ReciprocalUniform") return RenewalLaw::reciprocal_uniform();
    if (name == "LogPerturbedPareto") {
        const double a = alpha();
        if (!r.has("p")) throw ConfigError(r.field("p"), "missing; required by " + name);
        return RenewalLaw::log_perturbed_pareto(a, r.real_in("p", 0.0, 0.0, kInf, true, false));
    }
    if (name == "Geometric") {
        if (!r.has("q")) throw ConfigError(r.field("q"), "missing; required by " + name);
        return RenewalLaw::geometric(r.real_in("q", 0.5, 0.0, 1.0, false, true));
    }
    return RenewalLaw::deterministic();
}

Estimate stable_mc(const StableSpec& spec, std::size_t draws, std::uint64_t seed,
                   const std::function<double(double)>& f, int workers) {
    spec.validate();
    if (draws < 2) throw std::domain_error("stable_mc: need at least 2 draws");
    constexpr std::size_t chunk = 1 << 16;
    const std::size_t chunks = (draws + chunk - 1) / chunk;
    std::vector<double> s1(chunks), s2(chunks);
    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::size_t lo = c * chunk, hi = std::min(draws, lo + chunk);
        double a = 0, b = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = f(sample_standard_stable(spec, seed, 0, i));
            a += v;
            b += v * v;
        }
        s1[c] = a;
        s2[c] = b;
    });
    double a = 0, b = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        a += s1[c];
        b += s2[c];
    }
    const double n = double(draws), m = a / n;
    return {m, std::sqrt(std::max(0.0, b / n - m * m) / (n - 1.0))};
}

ExperimentOutput run_experiment(const std::string& name, const json& config, int workers) {
    Runner f = nullptr;
    for (const auto& [n, g] : runners())
        if (n == name) f = g;
    if (!f) {
        std::string all;
        for (const auto& n : experiment_names()) all += (all.empty() ? "" : ", ") + n;
        throw ConfigError("experiment", "'" + name + "' is not one of " + all);
    }
    const Reader r(config, "");
    if (r.has("experiment") && r.text("experiment", name) != name)
        throw ConfigError("experiment", "config names '" + r.text("experiment", name) + "' but '" + name + "' was requested");
    workers = std::max(1, workers);

    const auto t0 = std::chrono::steady_clock::now();
    Experiment e;
    try {
        e = f(r, workers);
    } catch (const std::domain_error& err) {
        // Cross-field constraints caught by the modules themselves.
        throw ConfigError("config", err.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ExperimentOutput out;
    out.name = name;
    out.summary = {{"experiment", name},
                   {"config", config},
                   {"config_hash", hex64(canonical_hash(config))},
                   {"seed", read_seed(r)},
                   {"version", library_version()},
                   {"results", e.results},
                   {"run", {{"wall_clock_seconds", secs}, {"workers", workers}}}};
    out.csv = std::move(e.csv);
    out.svgs = std::move(e.svgs);
    return out;
}

}  // namespace lmr
