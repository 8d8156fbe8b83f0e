#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "mvdrift/metrics.hpp"
#include "mvdrift/random.hpp"

using namespace mvdrift;

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
    using B = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NormalStream, SameKeySameDraws) {
    const StreamKey key{42, StreamDomain::branch, 3, 7};
    NormalStream a(key), b(key);
    for (int j = 0; j < 1000; ++j) EXPECT_EQ(a.next(), b.next());
}

TEST(NormalStream, FillMatchesNextWithScale) {
    const StreamKey key{5, StreamDomain::outer, 0, 0};
    NormalStream a(key), b(key);
    std::vector<double> out(17);
    a.fill(out, 0.5);
    for (double v : out) EXPECT_EQ(v, 0.5 * b.next());
}

TEST(NormalStream, MomentsOfStandardNormal) {
    NormalStream s({1, StreamDomain::outer, 0, 0});
    const int n = 200000;
    std::vector<double> x(n);
    for (auto& v : x) v = s.next();
    const auto est = mean_with_error(x);
    EXPECT_LT(std::abs(est.mean), 4.0 / std::sqrt(n));
    // Var of the sample variance of N(0,1) is 2 / (n - 1).
    EXPECT_LT(std::abs(est.variance - 1.0), 4.0 * std::sqrt(2.0 / (n - 1)));
    double m4 = 0.0;
    for (double v : x) m4 += v * v * v * v;
    EXPECT_NEAR(m4 / n, 3.0, 0.1);
}

TEST(NormalStream, DistinctKeysAreUncorrelated) {
    const int n = 100000;
    NormalStream a({9, StreamDomain::branch, 4, 0});
    NormalStream b({9, StreamDomain::branch, 4, 1});
    NormalStream c({9, StreamDomain::moments, 4, 0});
    double sab = 0.0, sac = 0.0;
    for (int j = 0; j < n; ++j) {
        const double x = a.next();
        sab += x * b.next();
        sac += x * c.next();
    }
    EXPECT_LT(std::abs(sab / n), 4.0 / std::sqrt(n));
    EXPECT_LT(std::abs(sac / n), 4.0 / std::sqrt(n));
}

TEST(NormalStream, UniformInOpenUnitInterval) {
    NormalStream s({77, StreamDomain::observation, 0, 0});
    double sum = 0.0;
    const int n = 100000;
    for (int j = 0; j < n; ++j) {
        const double u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(DeriveSeed, DistinctAndDeterministic) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t j = 0; j < 1000; ++j) seen.insert(derive_seed(123, j));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(derive_seed(123, 5), derive_seed(123, 5));
    EXPECT_NE(derive_seed(123, 5), derive_seed(124, 5));
}
