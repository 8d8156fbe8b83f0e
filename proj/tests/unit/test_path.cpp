#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mvdrift/metrics.hpp"
#include "mvdrift/path.hpp"

using namespace mvdrift;

namespace {

ModelParams wide_market() {
    ModelParams p;
    p.a = 0.5;
    p.b = -0.5;
    p.r = 0.0;
    p.pi0 = 0.5;
    return p;
}

}  // namespace

TEST(Grid, Examples) {
    const auto g = make_grid(1.0, 1000);
    EXPECT_DOUBLE_EQ(g.delta(), 0.001);
    EXPECT_EQ(g.nodes(), 1001u);
    EXPECT_EQ(g.time(1000), 1.0);

    const auto one = make_grid(1.0, 1);
    EXPECT_EQ(one.time(0), 0.0);
    EXPECT_EQ(one.time(1), 1.0);

    const auto two = make_grid(2.0, 4);
    EXPECT_EQ(two.delta(), 0.5);
    for (std::size_t k = 0; k <= 4; ++k) EXPECT_EQ(two.time(k), 0.5 * static_cast<double>(k));

    EXPECT_THROW((void)make_grid(1.0, 0), std::invalid_argument);
    EXPECT_THROW((void)make_grid(0.0, 4), std::invalid_argument);
    EXPECT_THROW((void)make_grid(-1.0, 4), std::invalid_argument);
}

TEST(Grid, EvaluationNodesAlwaysEndAtHorizon) {
    const GridSpec g{10, 1.0};
    EXPECT_EQ(evaluation_nodes(g, 3), (std::vector<std::size_t>{0, 3, 6, 9, 10}));
    EXPECT_EQ(evaluation_nodes(g, 5), (std::vector<std::size_t>{0, 5, 10}));
    EXPECT_EQ(evaluation_nodes(g, 20), (std::vector<std::size_t>{0, 10}));
    EXPECT_THROW((void)evaluation_nodes(g, 0), std::invalid_argument);
}

TEST(EnsembleSpec, Validation) {
    EXPECT_NO_THROW((EnsembleSpec{1, 0, 1}.validate()));
    EXPECT_THROW((EnsembleSpec{0, 0, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((EnsembleSpec{5, 0, 0}.validate()), std::invalid_argument);
}

TEST(SampleIncrements, DeterministicPerKey) {
    const GridSpec g{100, 1.0};
    EXPECT_EQ(sample_increments(branch_stream(3, 4, 5), g), sample_increments(branch_stream(3, 4, 5), g));
    EXPECT_NE(sample_increments(branch_stream(3, 4, 5), g), sample_increments(branch_stream(3, 4, 6), g));
    EXPECT_EQ(sample_increments(outer_stream(1), g, 7).size(), 7u);
}

TEST(SampleIncrements, VarianceMatchesStep) {
    const GridSpec g{1000, 1.0};
    const auto dnu = sample_increments(outer_stream(2024), g);
    const auto est = mean_with_error(dnu);
    const double se = g.delta() * std::sqrt(2.0 / 999.0);
    EXPECT_LT(std::abs(est.variance - g.delta()), 3.0 * se);
    EXPECT_LT(std::abs(est.mean), 3.0 * std::sqrt(g.delta() / 1000.0));
}

TEST(SampleIncrements, DistinctBranchesUncorrelated) {
    const std::size_t n = 100000;
    const GridSpec g{n, 1.0};
    const auto x = sample_increments(branch_stream(8, 0, 0), g);
    const auto y = sample_increments(branch_stream(8, 0, 1), g);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sxy += x[j] * y[j];
        sxx += x[j] * x[j];
        syy += y[j] * y[j];
    }
    EXPECT_LT(std::abs(sxy / std::sqrt(sxx * syy)), 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(CoarsenIncrements, SumsBlocks) {
    const std::vector<double> fine{1, 2, 3, 4, 5, 6};
    EXPECT_EQ(coarsen_increments(fine, 2), (std::vector<double>{3, 7, 11}));
    EXPECT_EQ(coarsen_increments(fine, 3), (std::vector<double>{6, 15}));
    EXPECT_EQ(coarsen_increments(fine, 1), fine);
    EXPECT_THROW((void)coarsen_increments(fine, 4), std::invalid_argument);
    EXPECT_THROW((void)coarsen_increments(fine, 0), std::invalid_argument);
}

TEST(EulerFilterStep, Examples) {
    EXPECT_DOUBLE_EQ(euler_filter_step(0.5, 0.1, 0.008), 0.5002);
    EXPECT_EQ(euler_filter_step(0.0, 0.7, 0.008), 0.0);
    EXPECT_EQ(euler_filter_step(1.0, -0.7, 0.008), 1.0);
}

TEST(OuterPath, ZeroIncrementsWithAbsorbingPrior) {
    ModelParams p;
    p.a = 0.04;
    p.b = 0.032;
    p.r = 0.0;
    const GridSpec g{10, 1.0};
    const std::vector<double> zeros(10, 0.0);
    for (double pi0 : {0.0, 1.0}) {
        p.pi0 = pi0;
        const auto path = simulate_outer_path(p, g, zeros);
        const double theta = p.excess_drift(pi0);
        for (std::size_t k = 0; k <= g.n; ++k) {
            EXPECT_EQ(path.pi[k], pi0);
            EXPECT_NEAR(path.lrho[k], -static_cast<double>(k) * g.delta() * 0.5 * theta * theta, 1e-18);
        }
    }
}

TEST(OuterPath, SingleStepComposesOperations) {
    const auto p = default_market();
    const GridSpec g{1, 1.0};
    const std::vector<double> dnu{0.3};
    const auto path = simulate_outer_path(p, g, dnu);
    EXPECT_EQ(path.pi[0], p.pi0);
    EXPECT_EQ(path.pi[1], euler_filter_step(p.pi0, 0.3, p.gamma()));
    EXPECT_EQ(path.lrho[1], log_rho_increment(p.pi0, 0.3, 1.0, p));
    EXPECT_THROW((void)simulate_outer_path(p, g, std::vector<double>{0.1, 0.2}), std::invalid_argument);
}

// The log recursions for rho and Phi use the same increment with opposite sign,
// so log Phi = -log rho holds exactly on the grid.
TEST(OuterPath, LogPhiMirrorsLogRho) {
    const auto p = wide_market();
    const GridSpec g{500, 1.0};
    const auto path = simulate_outer_path(p, g, outer_stream(31));
    for (std::size_t k = 0; k <= g.n; ++k) EXPECT_EQ(path.lphi[k], -path.lrho[k]);
}

TEST(OuterPath, OneStepBoundAndFreeze) {
    ModelParams p;
    p.a = 3.0;
    p.b = -3.0;
    p.r = 0.0;
    p.pi0 = 0.5;
    const GridSpec g{50, 1.0};
    bool saw_exit = false;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto path = simulate_outer_path(p, g, outer_stream(s));
        std::size_t exit_at = g.n + 1;
        for (std::size_t k = 0; k < g.n; ++k) {
            EXPECT_LE(std::abs(path.pi[k + 1] - path.pi[k]), p.gamma() / 4.0 * std::abs(path.dnu[k]) + 1e-15);
            if (exit_at > g.n && (path.pi[k] < 0.0 || path.pi[k] > 1.0)) exit_at = k;
        }
        if (exit_at <= g.n) {
            saw_exit = true;
            for (std::size_t l = exit_at; l <= g.n; ++l) EXPECT_EQ(path.pi[l], path.pi[exit_at]);
        }
    }
    EXPECT_TRUE(saw_exit) << "parameters chosen so that some paths leave [0, 1]";
}

TEST(OuterPath, StrongEulerRateUnderRefinement) {
    const auto p = wide_market();
    const std::size_t finest = 2048;
    const std::size_t paths = 200;
    std::vector<double> deltas, errors;
    for (std::size_t n = 16; n <= 1024; n *= 2) {
        double acc = 0.0;
        for (std::size_t s = 0; s < paths; ++s) {
            const auto fine = sample_increments(outer_stream(1000 + s), {finest, 1.0});
            const auto coarse = simulate_outer_path(p, {n, 1.0}, coarsen_increments(fine, finest / n));
            const auto half = simulate_outer_path(p, {2 * n, 1.0}, coarsen_increments(fine, finest / (2 * n)));
            double sup = 0.0;
            for (std::size_t k = 0; k <= n; ++k) sup = std::max(sup, std::abs(coarse.pi[k] - half.pi[2 * k]));
            acc += sup * sup;
        }
        deltas.push_back(1.0 / static_cast<double>(n));
        errors.push_back(std::sqrt(acc / static_cast<double>(paths)));
    }
    const auto fit = convergence_fit(deltas, errors);
    EXPECT_NEAR(fit.slope, 0.5, 0.15);
    EXPECT_GE(fit.r2, 0.9);
}

TEST(BranchEnsemble, RootAtHorizonIsTrivial) {
    const auto p = default_market();
    const GridSpec g{20, 1.0};
    const auto outer = simulate_outer_path(p, g, outer_stream(4));
    const auto ens = grow_branch_ensemble(outer, g.n, {5, 9, 1}, p, g);
    EXPECT_EQ(ens.length(), 0u);
    for (std::size_t i = 0; i < ens.size(); ++i) EXPECT_EQ(ens.rho_terminal(i), std::exp(outer.lrho[g.n]));
}

TEST(BranchEnsemble, PrefixSharedAndContinuationFollowsRecursion) {
    const auto p = wide_market();
    const GridSpec g{40, 1.0};
    const auto outer = simulate_outer_path(p, g, outer_stream(6));
    const std::size_t k = 15;
    const auto ens = grow_branch_ensemble(outer, k, {4, 77, 1}, p, g);
    ASSERT_EQ(ens.root(), k);
    ASSERT_EQ(ens.last_node(), g.n);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        for (std::size_t l = 0; l <= k; ++l) {
            EXPECT_EQ(ens.pi_at(i, l), outer.pi[l]);
            EXPECT_EQ(ens.lrho_at(i, l), outer.lrho[l]);
        }
        EXPECT_EQ(ens.dnu(i)[0], sample_increments(branch_stream(77, k, i), g, g.n - k)[0]);
        double pi = outer.pi[k], lrho = outer.lrho[k];
        for (std::size_t l = k; l < g.n; ++l) {
            const double dnu = ens.dnu(i)[l - k];
            lrho += log_rho_increment(pi, dnu, g.delta(), p);
            pi = euler_filter_step(pi, dnu, p.gamma());
            EXPECT_EQ(ens.pi_at(i, l + 1), pi);
            EXPECT_EQ(ens.lrho_at(i, l + 1), lrho);
        }
    }
    EXPECT_THROW((void)grow_branch_ensemble(outer, g.n + 1, {4, 77, 1}, p, g), std::invalid_argument);
    EXPECT_THROW((void)grow_branch_ensemble(outer, k, {4, 77, 1}, p, GridSpec{41, 1.0}), std::invalid_argument);
}

TEST(BranchEnsemble, Deterministic) {
    const auto p = wide_market();
    const GridSpec g{30, 1.0};
    const auto outer = simulate_outer_path(p, g, outer_stream(12));
    const auto a = grow_branch_ensemble(outer, 7, {8, 3, 1}, p, g);
    const auto b = grow_branch_ensemble(outer, 7, {8, 3, 1}, p, g);
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j <= a.length(); ++j) {
            EXPECT_EQ(a.pi(i)[j], b.pi(i)[j]);
            EXPECT_EQ(a.lrho(i)[j], b.lrho(i)[j]);
        }
    }
}
