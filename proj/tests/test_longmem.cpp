#include "lmr/longmem.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>

#include "lmr/errors.hpp"

using namespace lmr;

namespace {

LinearProcessSpec farima(double d) {
    LinearProcessSpec s;
    s.d = d;
    return s;
}

}  // namespace

TEST(Coefficients, FarimaRecursion) {
    const auto a = coefficients(farima(0.3), 3);
    EXPECT_DOUBLE_EQ(a[0], 1.0);
    EXPECT_DOUBLE_EQ(a[1], 0.3);
    EXPECT_NEAR(a[2], 0.195, 1e-15);
}

TEST(Coefficients, PowerLaw) {
    LinearProcessSpec s;
    s.d = 0.25;
    s.family = CoefFamily::PowerLaw;
    s.C_d = 1.0;
    const auto a = coefficients(s, 5);
    EXPECT_NEAR(a[4], 0.35355339059327373, 1e-15);
    EXPECT_DOUBLE_EQ(a[0], 1.0);
}

TEST(Coefficients, AsymptoticRatioAndPositivity) {
    for (double d : {0.05, 0.3, 0.45}) {
        const auto s = farima(d);
        const auto a = coefficients(s, 1 << 20);
        for (double v : a) ASSERT_GT(v, 0.0);
        const double i = (1 << 20) - 1;
        EXPECT_NEAR(a.back() / (s.coef_scale() * std::pow(i, d - 1)), 1.0, 1e-5);
    }
}

TEST(Coefficients, WhiteNoiseLimit) {
    const auto a = coefficients(farima(1e-12), 10);
    EXPECT_EQ(a[0], 1.0);
    for (int i = 1; i < 10; ++i) EXPECT_LT(a[i], 1e-11);
}

TEST(Coefficients, DomainErrors) {
    EXPECT_THROW(coefficients(farima(0.5), 3), std::domain_error);
    EXPECT_THROW(coefficients(farima(0.0), 3), std::domain_error);
    EXPECT_THROW(coef_family_from_string("ARMA"), std::domain_error);
}

TEST(ExactAcov, FrozenValues) {
    const auto s = farima(0.3);
    EXPECT_NEAR(exact_acov(0, s), 1.316456062130004719, 1e-13);
    EXPECT_NEAR(exact_acov(1, s), 0.564195455198573451, 1e-13);
    EXPECT_NEAR(exact_acov(100, s) / 0.090531547485464439, 1.0, 1e-12);
    EXPECT_NEAR(exact_acov(4096, s) / 0.020504848857544929, 1.0, 1e-12);
    EXPECT_NEAR(exact_acov(1e12, s) / 9.05316742276538128e-6, 1.0, 1e-11);
    auto s2 = s;
    s2.sigma_eps2 = 2.5;
    EXPECT_NEAR(exact_acov(7, s2), 2.5 * exact_acov(7, s), 1e-14);
}

TEST(ExactAcov, WhiteNoiseLimit) { EXPECT_LT(exact_acov(1, farima(1e-9)), 1e-8); }

TEST(ExactAcov, AsymptoticRatio) {
    const auto s = farima(0.3);
    const double r = exact_acov(4096, s) / asymptotic_acov(4096, s.constants());
    EXPECT_NEAR(r, 1.0, 0.02);
    EXPECT_NEAR(exact_acov(1e10, s) / asymptotic_acov(1e10, s.constants()), 1.0, 1e-8);
    EXPECT_NEAR(asymptotic_acov(200, s.constants()) / asymptotic_acov(100, s.constants()), std::pow(2.0, -0.4), 1e-14);
    EXPECT_THROW(asymptotic_acov(0, s.constants()), std::domain_error);
}

TEST(ExactAcov, UBounded) {
    const auto s = farima(0.3);
    double K = 0;
    for (double h = 1; h <= 65536; h *= 1.1) K = std::max(K, acov_u(h, s));
    EXPECT_LT(K, 2.0);
    EXPECT_GT(K, 0.5);
}

TEST(ExactAcov, ToeplitzPositiveSemidefinite) {
    for (double d : {0.1, 0.3, 0.45}) {
        const auto s = farima(d);
        Eigen::MatrixXd G(64, 64);
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) G(i, j) = exact_acov(std::abs(i - j), s);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
    }
}

TEST(ExactAcov, TruncationBiasBound) {
    const auto s = farima(0.3);
    const double C = s.coef_scale() * s.coef_scale() / (1 - 2 * s.d) * 1.05;
    for (int e : {12, 14, 16}) {
        const double M = std::pow(2.0, e);
        const double bias = exact_acov(0, s) - truncated_variance(s, static_cast<std::uint64_t>(M));
        EXPECT_GT(bias, 0.0);
        EXPECT_LE(bias, C * std::pow(M, 2 * s.d - 1));
    }
}

TEST(ExactAcov, PowerLawMatchesLongSum) {
    LinearProcessSpec s;
    s.family = CoefFamily::PowerLaw;
    s.d = 0.2;
    s.C_d = 1.3;
    for (int h : {0, 1, 5, 300}) {
        // Direct sum to 2e6 plus the integral tail of the power law.
        const auto a = coefficients(s, 2000000 + h);
        double sum = 0;
        for (std::size_t i = 2000000; i-- > 0;) sum += a[i] * a[i + h];
        const double N = 2000000;
        const double tail = s.C_d * s.C_d * std::pow(N, 2 * s.d - 1) / (1 - 2 * s.d);
        EXPECT_NEAR(exact_acov(h, s) / (sum + tail), 1.0, 2e-6) << h;
    }
}

TEST(AcovTable, MatchesExact) {
    const auto s = farima(0.35);
    AcovTable t(s, 1000);
    for (double h : {0.0, 1.0, 17.0, 999.0, 1000.0, 123456.0, 1e14})
        EXPECT_NEAR(t(h) / exact_acov(h, s), 1.0, 1e-11) << h;
}

TEST(Innovations, BulkMatchesPointwise) {
    for (auto law : {InnovationLaw::Gaussian, InnovationLaw::Rademacher, InnovationLaw::CenteredExponential}) {
        auto s = farima(0.3);
        s.innovation = law;
        s.sigma_eps2 = 2.0;
        std::vector<double> v(700);
        innovations(s, 99, -300, v.size(), v.data());
        for (std::size_t k = 0; k < v.size(); ++k) ASSERT_EQ(v[k], innovation(s, 99, -300 + std::int64_t(k)));
    }
}

TEST(Innovations, MomentsPerLaw) {
    for (auto law : {InnovationLaw::Gaussian, InnovationLaw::Rademacher, InnovationLaw::CenteredExponential}) {
        auto s = farima(0.3);
        s.innovation = law;
        std::vector<double> v(400000);
        innovations(s, 5, 1, v.size(), v.data());
        double m = 0, m2 = 0;
        for (double x : v) {
            m += x;
            m2 += x * x;
        }
        m /= v.size();
        m2 /= v.size();
        EXPECT_NEAR(m, 0.0, 0.01);
        EXPECT_NEAR(m2, 1.0, 0.02);
    }
}

TEST(Generate, DeterministicAndSized) {
    const auto s = farima(0.3);
    const auto a = generate(s, 1000, 17);
    const auto b = generate(s, 1000, 17);
    ASSERT_EQ(a.values.size(), 1000u);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.truncation, 4000u);
    EXPECT_GT(a.truncation_bias, 0.0);
    const auto c = generate(s, 1000, 18);
    EXPECT_NE(a.values, c.values);
}

TEST(Generate, MatchesDirectConvolution) {
    auto s = farima(0.25);
    s.truncation = 300;
    const auto p = generate(s, 200, 3);
    const auto a = coefficients(s, 301);
    for (int t : {1, 57, 200}) {
        double x = 0;
        for (int i = 0; i <= 300; ++i) x += a[i] * innovation(s, 3, t - i);
        EXPECT_NEAR(p.values[t - 1], x, 1e-10);
    }
}

TEST(Generate, AtTimesMatchesFullPath) {
    auto s = farima(0.3);
    s.truncation = 5000;
    const auto p = generate(s, 20000, 8);
    std::vector<std::int64_t> times = {1, 2, 3, 700, 701, 9000, 15000, 15001, 19999, 20000};
    for (int k = 0; k < 400; ++k) times.push_back(10000 + 3 * k);
    std::sort(times.begin(), times.end());
    const auto x = generate_at(s, times, 5000, 8);
    for (std::size_t k = 0; k < times.size(); ++k) EXPECT_NEAR(x[k], p.values[times[k] - 1], 1e-9);
}

TEST(Generate, ResourceCap) {
    const auto s = farima(0.3);
    try {
        generate(s, 1000, 1, 100);
        FAIL();
    } catch (const ResourceError& e) {
        EXPECT_EQ(e.realized(), 6000u);
        EXPECT_EQ(e.cap(), 100u);
    }
}

TEST(Generate, SampleAutocovarianceMatchesExact) {
    // 200 replicates, n = 2^14, M_c = 2^16. Tolerance: 3 SE plus the
    // documented truncation bias.
    auto s = farima(0.3);
    s.truncation = 1 << 16;
    const int n = 1 << 14, reps = 200;
    const int lags[] = {0, 1, 4, 16, 64};
    std::vector<std::vector<double>> est(5);
    for (int r = 0; r < reps; ++r) {
        const auto p = generate(s, n, 1000 + r);
        for (int li = 0; li < 5; ++li) {
            const int h = lags[li];
            double acc = 0;
            for (int t = 0; t + h < n; ++t) acc += p.values[t] * p.values[t + h];
            est[li].push_back(acc / (n - h));
        }
    }
    const double bias = exact_acov(0, s) - truncated_variance(s, s.truncation);
    for (int li = 0; li < 5; ++li) {
        double m = 0, v = 0;
        for (double e : est[li]) m += e;
        m /= reps;
        for (double e : est[li]) v += (e - m) * (e - m);
        const double se = std::sqrt(v / (reps - 1) / reps);
        EXPECT_NEAR(m, exact_acov(lags[li], s), 3 * se + bias) << "lag " << lags[li];
    }
    EXPECT_NEAR(est[0].size(), 200u, 0);
}

TEST(Generate, WhiteNoiseLagOne) {
    auto s = farima(1e-9);
    const int n = 1 << 14;
    const auto p = generate(s, n, 77);
    double acc = 0;
    for (int t = 0; t + 1 < n; ++t) acc += p.values[t] * p.values[t + 1];
    EXPECT_NEAR(acc / (n - 1), 0.0, 3.0 / std::sqrt(double(n)));
}
