#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mvdrift/example_bsde.hpp"
#include "mvdrift/metrics.hpp"
#include "mvdrift/model.hpp"

namespace mvdrift {

// Replicated experiments shared by the acceptance driver and the CLI. Every
// study draws seed s from derive_seed(master_seed, s), so results depend only
// on the configuration and never on the thread count.

struct ExampleStudyConfig {
    std::size_t n = 200;
    std::size_t m = 200;
    std::size_t stride = 10;
    std::size_t seeds = 20;
    std::size_t n2 = 10;  ///< fine steps per coarse step for the old scheme (n1 = n / n2)
    std::uint64_t master_seed = 20240601;
    unsigned threads = 1;
};

struct ExampleSeedResult {
    std::uint64_t seed = 0;
    double x_rel_l2 = 0.0;  ///< new scheme vs closed form, stride nodes
    double z_rel_l2 = 0.0;
    double z_new_l2 = 0.0;  ///< Z errors on the interior coarse nodes of the double grid
    double z_old_l2 = 0.0;
    ExampleTrajectory estimate;  ///< new scheme at the stride nodes
    std::vector<double> X_true;  ///< closed form at the same nodes
    std::vector<double> Z_true;
};

struct ExampleStudyResult {
    std::vector<ExampleSeedResult> seeds;
    double median_x_rel_l2 = 0.0;
    double median_z_rel_l2 = 0.0;
    std::size_t new_wins = 0;  ///< seeds with z_new_l2 < z_old_l2
};

/// Closed-form example: new scheme against the exact solution and, when
/// `with_baseline`, against the double-partition scheme at the same total
/// number of Euler steps (n1 n2 = n) and branch count.
[[nodiscard]] ExampleStudyResult example_study(const ExampleStudyConfig& cfg, bool with_baseline);

/// Large drift gap (a = 1, b = -1, r = 0, pi0 = 1/2) so the time
/// discretisation error is visible above the Monte Carlo floor.
[[nodiscard]] ModelParams delta_sweep_market();

/// Small drift gap with a large excess drift (a = 1.2, b = 0.8, r = 0,
/// pi0 = 1/2): the filter error stays small while rho_T is widely spread, so
/// the branch-count error dominates.
[[nodiscard]] ModelParams m_sweep_market();

struct RateStudyConfig {
    ModelParams delta_params = delta_sweep_market();
    ModelParams m_params = m_sweep_market();
    std::vector<std::size_t> delta_levels{32, 64, 128, 256, 512};  ///< n values of the delta sweep
    std::size_t delta_m = 1024;                            ///< branches at every delta level
    std::vector<std::size_t> m_levels{8, 32, 128, 512};    ///< branch counts of the m sweep
    std::size_t m_study_n = 64;                            ///< steps at every m level
    std::vector<double> eval_times{0.25, 0.5, 0.75};
    std::size_t replications = 64;  ///< outer paths
    std::size_t moment_paths = 100000;
    std::uint64_t master_seed = 7;
    unsigned threads = 1;
};

struct RateSeries {
    std::string name;  ///< "Y_vs_delta", "u_vs_delta", "Y_vs_inv_m", "u_vs_inv_m"
    ConvergenceFit fit;
};

struct RateStudyResult {
    std::vector<RateSeries> series;
    TerminalCoefficients delta_coefficients;
    TerminalCoefficients m_coefficients;
};

/// Root-mean-square error of Y and u over outer paths and evaluation times
/// against a self-reference with 8x the finest steps and 8x the branches.
/// Levels are coupled to the reference: outer and branch increments are drawn
/// on the reference grid and summed down, branch i of a level being branch i
/// of the reference. (c1, c2) are estimated once per sweep and held fixed.
[[nodiscard]] RateStudyResult rate_study(const RateStudyConfig& cfg);

struct BudgetStudyConfig {
    ModelParams params = default_market();
    std::size_t n = 100;
    std::size_t replications = 2000;
    std::size_t moment_paths = 200000;
    std::uint64_t master_seed = 11;
    unsigned threads = 1;
};

struct BudgetStudyResult {
    MeanEstimate rho_y;  ///< rho_T Y_T across replications, target y0
    MeanEstimate y;      ///< Y_T, target z
    TerminalCoefficients coefficients;
};

/// Y_T = c1 + c2 rho_T along independent outer paths, with (c1, c2) from a
/// separate moment sample.
[[nodiscard]] BudgetStudyResult budget_study(const BudgetStudyConfig& cfg);

struct FilterStudyConfig {
    ModelParams params = default_market();
    std::vector<std::size_t> levels{32, 64, 128, 256, 512, 1024};
    std::size_t replications = 400;
    std::uint64_t master_seed = 13;
};

struct FilterLevel {
    std::size_t n = 0;
    MeanEstimate sup_error;
    MeanEstimate nu_mean;
    double nu_variance = 0.0;
    double nu_variance_se = 0.0;
    double delta = 0.0;
};

struct FilterStudyResult {
    std::vector<FilterLevel> levels;
    ConvergenceFit fit;  ///< mean sup error vs delta
};

/// Euler filter against the Bayes posterior at each level. The observation
/// noise of every level is the finest level's noise summed down.
[[nodiscard]] FilterStudyResult filter_study(const FilterStudyConfig& cfg);

struct ConstantDriftStudyConfig {
    ModelParams params = [] {
        auto p = default_market();
        p.pi0 = 1.0;
        return p;
    }();
    std::size_t n = 100;
    std::size_t m = 4000;
    std::size_t stride = 10;
    std::uint64_t master_seed = 17;
    unsigned threads = 1;
};

struct ConstantDriftNode {
    double t = 0.0;
    double Y = 0.0, Y_true = 0.0, Y_se = 0.0;
    double u = 0.0, u_true = 0.0, u_se = 0.0;
};

struct ConstantDriftStudyResult {
    std::vector<ConstantDriftNode> nodes;
    TerminalCoefficients coefficients;
};

/// Particle scheme with a known drift against the lognormal closed form on
/// the same outer path. (c1, c2) come from the exact moments.
[[nodiscard]] ConstantDriftStudyResult constant_drift_study(const ConstantDriftStudyConfig& cfg);

}  // namespace mvdrift
