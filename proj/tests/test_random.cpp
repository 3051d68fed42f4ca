#include "lmr/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lmr;

TEST(Philox, KnownAnswerVectors) {
    // Reference vectors from the Random123 distribution.
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, 0, 0), (u32x4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, 0xffffffffu, 0xffffffffu),
              (u32x4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, 0xa4093822u, 0x299f31d0u),
              (u32x4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Rng, DeterministicAndPositionable) {
    Rng a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
    Rng c(42, 7, 10), d(42, 7);
    for (int i = 0; i < 20; ++i) d.next_u64();
    EXPECT_EQ(c.next_u64(), d.next_u64());
    Rng e(42, 8);
    Rng f(42, 7);
    EXPECT_NE(e.next_u64(), f.next_u64());
}

TEST(Rng, UniformOpenInterval) {
    EXPECT_GT(to_open01(0), 0.0);
    EXPECT_LT(to_open01(~0ull), 1.0);
    Rng r(1, 2);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(s2 / n - 0.25, 1.0 / 12, 2e-3);
}

TEST(Rng, NormalMoments) {
    Rng r(3, 4);
    const int n = 200000;
    double m1 = 0, m2 = 0, m4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        m1 += z;
        m2 += z * z;
        m4 += z * z * z * z;
    }
    EXPECT_NEAR(m1 / n, 0.0, 4 / std::sqrt(double(n)));
    EXPECT_NEAR(m2 / n, 1.0, 4 * std::sqrt(2.0 / n));
    EXPECT_NEAR(m4 / n, 3.0, 4 * std::sqrt(96.0 / n));
}

TEST(DeriveSeed, DistinctTags) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
}
