#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mvdrift/metrics.hpp"

using namespace mvdrift;

TEST(ErrorReport, IdenticalInputsGiveZero) {
    const std::vector<double> x{1.0, -2.0, 3.0};
    const std::vector<double> t{0.0, 0.5, 1.0};
    const auto rep = error_report(x, x, t);
    EXPECT_EQ(rep.l2, 0.0);
    EXPECT_EQ(rep.sup, 0.0);
    EXPECT_EQ(rep.rel_l2, 0.0);
    for (double e : rep.rel_error) EXPECT_EQ(e, 0.0);
}

TEST(ErrorReport, ConstantOffset) {
    std::vector<double> t, ref, approx;
    for (int k = 0; k <= 20; ++k) {
        t.push_back(2.0 * k / 20.0);
        ref.push_back(std::sin(k));
        approx.push_back(std::sin(k) + 0.3);
    }
    const auto rep = error_report(approx, ref, t);
    EXPECT_NEAR(rep.sup, 0.3, 1e-15);
    EXPECT_NEAR(rep.l2, 0.3 * std::sqrt(2.0), 1e-14);
    EXPECT_LE(rep.l2, rep.sup * std::sqrt(2.0) + 1e-14);
}

TEST(ErrorReport, TriangleInequality) {
    const std::vector<double> t{0.0, 0.1, 0.3, 0.6, 1.0};
    const std::vector<double> a{1.0, 2.0, -1.0, 0.5, 0.0};
    const std::vector<double> b{0.5, 1.0, 1.0, 0.0, 2.0};
    const std::vector<double> c{-1.0, 0.0, 3.0, 2.0, 1.0};
    EXPECT_LE(error_report(a, c, t).l2, error_report(a, b, t).l2 + error_report(b, c, t).l2 + 1e-14);
    EXPECT_LE(error_report(a, c, t).sup, error_report(a, b, t).sup + error_report(b, c, t).sup + 1e-14);
}

TEST(ErrorReport, RelativeErrorsAndEdgeCases) {
    const std::vector<double> t{0.0, 1.0};
    const auto rep = error_report(std::vector<double>{1.1, 0.0}, std::vector<double>{1.0, 0.0}, t);
    EXPECT_NEAR(rep.rel_error[0], 0.1, 1e-12);
    EXPECT_EQ(rep.rel_error[1], 0.0);
    const auto inf = error_report(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 0.0}, t);
    EXPECT_TRUE(std::isinf(inf.rel_error[1]));

    const auto single = error_report(std::vector<double>{2.0}, std::vector<double>{-1.0}, std::vector<double>{0.5});
    EXPECT_EQ(single.l2, 3.0);

    EXPECT_THROW((void)error_report(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, t), std::invalid_argument);
    EXPECT_THROW((void)error_report(std::vector<double>{}, std::vector<double>{}, std::vector<double>{}),
                 std::invalid_argument);
    EXPECT_THROW((void)error_report(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0},
                                    std::vector<double>{1.0, 1.0}),
                 std::invalid_argument);
}

TEST(AggregateReports, AveragesAndStandardError) {
    const std::vector<double> t{0.0, 1.0};
    const std::vector<double> zero{0.0, 0.0};
    std::vector<ErrorReport> reps{error_report(std::vector<double>{1.0, 1.0}, zero, t),
                                  error_report(std::vector<double>{3.0, 3.0}, zero, t)};
    const auto agg = aggregate_reports(reps);
    EXPECT_EQ(agg.replications, 2u);
    EXPECT_DOUBLE_EQ(agg.l2, 2.0);
    EXPECT_DOUBLE_EQ(agg.l2_se, 1.0);
    EXPECT_DOUBLE_EQ(agg.abs_error[0], 2.0);
    EXPECT_DOUBLE_EQ(agg.sup, 2.0);
    EXPECT_THROW((void)aggregate_reports(std::vector<ErrorReport>{}), std::invalid_argument);
}

TEST(ConvergenceFit, ExactPowerLaws) {
    std::vector<double> deltas, errs;
    for (int j = 4; j <= 10; ++j) {
        deltas.push_back(std::ldexp(1.0, -j));
        errs.push_back(3.0 * std::sqrt(deltas.back()));
    }
    const auto fit = convergence_fit(deltas, errs);
    EXPECT_NEAR(fit.slope, 0.5, 1e-12);
    EXPECT_NEAR(fit.r2, 1.0, 1e-12);
    EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-12);

    std::vector<double> inv_m, merr;
    for (double m : {10.0, 100.0, 1000.0}) {
        inv_m.push_back(1.0 / m);
        merr.push_back(2.0 / std::sqrt(m));
    }
    EXPECT_NEAR(convergence_fit(inv_m, merr).slope, 0.5, 1e-12);
}

TEST(ConvergenceFit, RejectsBadInput) {
    const std::vector<double> two{1.0, 2.0};
    EXPECT_THROW((void)convergence_fit(two, two), std::invalid_argument);
    const std::vector<double> x{1.0, 2.0, 3.0};
    EXPECT_THROW((void)convergence_fit(x, std::vector<double>{1.0, 0.0, 2.0}), std::invalid_argument);
    EXPECT_THROW((void)convergence_fit(x, two), std::invalid_argument);
    EXPECT_THROW((void)convergence_fit(std::vector<double>{2.0, 2.0, 2.0}, x), std::invalid_argument);
}

TEST(MeanWithError, Basics) {
    const auto est = mean_with_error(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(est.mean, 2.5);
    EXPECT_DOUBLE_EQ(est.variance, 5.0 / 3.0);
    EXPECT_DOUBLE_EQ(est.se, std::sqrt(5.0 / 12.0));
    EXPECT_EQ(mean_with_error(std::vector<double>{}).count, 0u);
    EXPECT_EQ(mean_with_error(std::vector<double>{7.0}).se, 0.0);
}

TEST(Median, OddAndEven) {
    EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
    EXPECT_THROW((void)median({}), std::invalid_argument);
}
