#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "mvdrift/model.hpp"

using namespace mvdrift;

TEST(TruncatedDiffusion, Examples) {
    EXPECT_EQ(truncated_diffusion(0.0, 0.008), 0.0);
    EXPECT_EQ(truncated_diffusion(1.0, 0.008), 0.0);
    EXPECT_EQ(truncated_diffusion(1.2, 0.008), 0.0);
    EXPECT_EQ(truncated_diffusion(-0.1, 0.008), 0.0);
    EXPECT_DOUBLE_EQ(truncated_diffusion(0.5, 0.008), 0.002);
}

TEST(TruncatedDiffusion, BoundedAndLipschitzOnDenseSample) {
    const double gamma = 0.8;
    double prev_x = -0.5;
    double prev_v = truncated_diffusion(prev_x, gamma);
    for (int j = 1; j <= 20000; ++j) {
        const double x = -0.5 + 2.0 * j / 20000.0;
        const double v = truncated_diffusion(x, gamma);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, gamma / 4.0 + 1e-15);
        EXPECT_LE(std::abs(v - prev_v), gamma * (x - prev_x) + 1e-15);
        prev_x = x;
        prev_v = v;
    }
}

TEST(LogRhoIncrement, Examples) {
    const auto p = default_market();
    EXPECT_EQ(log_rho_increment(0.37, 0.0, 0.0, p), 0.0);
    EXPECT_NEAR(log_rho_increment(1.0, 0.0, 0.001, p), -3.005e-5, 1e-17);
    EXPECT_NEAR(log_rho_increment(0.0, 0.1, 0.001, p), -2.30002e-4, 1e-17);
}

TEST(ExactPosterior, DegeneratePriorIsAbsorbing) {
    const auto p = default_market();
    EXPECT_EQ(exact_posterior(1.0, 3.7, 0.4, p), 1.0);
    EXPECT_EQ(exact_posterior(0.0, -2.0, 0.9, p), 0.0);
}

TEST(ExactPosterior, UnitLikelihoodRatioKeepsPrior) {
    const auto p = default_market();
    const double t = 0.7;
    const double L = 0.5 * (p.a + p.b - 1.0) * t;
    EXPECT_NEAR(exact_posterior(0.5, L, t, p), 0.5, 1e-14);
}

TEST(ExactPosterior, LikelihoodRatioTwo) {
    const auto p = default_market();
    const double t = 0.3;
    const double g = p.gamma();
    const double L = (std::log(2.0) + 0.5 * g * (p.a + p.b - 1.0) * t) / g;
    EXPECT_NEAR(exact_posterior(0.3, L, t, p), 0.6 / 1.3, 1e-12);
}

TEST(ExactPosterior, ExtremeLogPriceDoesNotOverflow) {
    const auto p = default_market();
    EXPECT_EQ(exact_posterior(0.5, 1e6, 1.0, p), 1.0);
    EXPECT_EQ(exact_posterior(0.5, -1e6, 1.0, p), 0.0);
    EXPECT_THROW((void)exact_posterior(1.5, 0.0, 1.0, p), std::invalid_argument);
    EXPECT_THROW((void)exact_posterior(0.5, 0.0, -1.0, p), std::invalid_argument);
}

TEST(ComputeC1C2, HandExample) {
    ModelParams p;
    p.y0 = 1.0;
    p.z = 2.0;
    MomentEstimates m;
    m.e_rho = 1.0;
    m.e_rho2 = 2.0;
    const auto c = compute_c1_c2(m, p);
    EXPECT_DOUBLE_EQ(c.c1, 3.0);
    EXPECT_DOUBLE_EQ(c.c2, -1.0);
    EXPECT_DOUBLE_EQ(c.moments.var_rho, 1.0);
}

TEST(ComputeC1C2, VanishingC2WhenBudgetMatchesTarget) {
    ModelParams p;
    p.y0 = 1.0;
    p.z = 2.0;
    MomentEstimates m;
    m.e_rho = 0.5;  // y0 = z e_rho
    m.e_rho2 = 0.4;
    EXPECT_EQ(compute_c1_c2(m, p).c2, 0.0);
}

TEST(ComputeC1C2, BudgetIdentitiesHoldForManyMoments) {
    ModelParams p = default_market();
    for (int j = 0; j < 200; ++j) {
        MomentEstimates m;
        m.e_rho = 0.5 + 0.01 * j;
        m.e_rho2 = m.e_rho * m.e_rho * (1.0 + 0.001 * (j + 1));
        const auto c = compute_c1_c2(m, p);
        EXPECT_NEAR(c.c1 + c.c2 * m.e_rho, p.z, 1e-9 * (std::abs(c.c1) + p.z));
        EXPECT_NEAR(c.c1 * m.e_rho + c.c2 * m.e_rho2, p.y0, 1e-9 * (std::abs(c.c1) + p.y0));
    }
}

TEST(ComputeC1C2, ConstantDriftLognormalMoments) {
    const auto p = default_market();
    MomentEstimates m;
    m.e_rho = std::exp(-0.03);
    m.e_rho2 = std::exp(-0.06 + 0.0001);
    const auto c = compute_c1_c2(m, p);
    const double var = m.e_rho2 - m.e_rho * m.e_rho;
    EXPECT_NEAR(c.c1, (p.z * m.e_rho2 - p.y0 * m.e_rho) / var, 1e-6);
    EXPECT_NEAR(c.c2, (p.y0 - p.z * m.e_rho) / var, 1e-6);
    EXPECT_LT(c.c2, 0.0);
}

TEST(ComputeC1C2, DegenerateVarianceThrows) {
    const auto p = default_market();
    MomentEstimates m;
    m.e_rho = 0.9;
    m.e_rho2 = 0.81;
    EXPECT_THROW((void)compute_c1_c2(m, p), DegenerateVarianceError);
    m.e_rho2 = 0.80;
    EXPECT_THROW((void)compute_c1_c2(m, p), DegenerateVarianceError);
}

TEST(ModelParams, Validation) {
    auto p = default_market();
    EXPECT_NO_THROW(p.validate());
    EXPECT_DOUBLE_EQ(p.gamma(), 0.008);
    EXPECT_DOUBLE_EQ(p.z, 106.0);
    EXPECT_DOUBLE_EQ(p.excess_drift(1.0), 0.01);

    auto bad = p;
    bad.b = bad.a;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = p;
    bad.pi0 = 1.01;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = p;
    bad.y0 = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = p;
    bad.horizon = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = p;
    bad.r = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(bad.validate(), std::invalid_argument);

    bad = p;
    bad.pi0 = 0.0;
    EXPECT_NO_THROW(bad.validate());
}
