#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mvdrift/malliavin.hpp"
#include "mvdrift/metrics.hpp"
#include "mvdrift/model.hpp"
#include "mvdrift/path.hpp"

namespace mvdrift {

/// Exact E rho_T = exp(-r T) and E rho_T^2 = exp((theta^2 - 2r) T) when the
/// prior is degenerate (pi0 in {0, 1}) and the drift is known.
[[nodiscard]] MomentEstimates constant_drift_moments(const ModelParams& params);

struct ConstantDriftSolution {
    std::vector<double> times;
    std::vector<double> Y;
    std::vector<double> u;
};

/// Closed-form wealth and portfolio for a known drift (pi0 in {0, 1}),
/// theta = drift - r, tau = T - t:
///
///   Y(t) = c1 exp(-r tau) + c2 rho_t exp((theta^2 - 2r) tau)
///   u(t) = -theta c2 rho_t exp((theta^2 - 2r) tau)
///
/// rho_t is read from the outer path. Throws std::invalid_argument when
/// 0 < pi0 < 1.
[[nodiscard]] ConstantDriftSolution constant_drift_oracle(const ModelParams& params, const GridSpec& grid,
                                                          const OuterPath& outer, const TerminalCoefficients& coeffs,
                                                          std::span<const std::size_t> nodes);

/// Euler filter driven by the innovation reconstructed from an observed
/// log-price path, compared with the exact Bayes posterior.
struct FilterComparison {
    double sup_error = 0.0;
    std::vector<double> dnu;       ///< reconstructed innovation increments
    std::vector<double> pi_euler;  ///< n + 1 nodes
    std::vector<double> pi_exact;  ///< n + 1 nodes
};

/// dL = (mu - 1/2) dt + dW with mu = a when `bull`, else b.
[[nodiscard]] FilterComparison compare_filter_on_path(const ModelParams& params, const GridSpec& grid, bool bull,
                                                      std::span<const double> dW);

struct FilterOracleReport {
    std::vector<double> sup_errors;  ///< one per replication
    MeanEstimate sup_error;
    MeanEstimate nu_mean;            ///< pooled innovation increments
    double nu_variance = 0.0;        ///< pooled sample variance of increments
    double nu_variance_se = 0.0;     ///< delta * sqrt(2 / (N - 1)) under normality
    std::size_t increments = 0;
};

/// Draws mu ~ Bernoulli(pi0) over {a, b} and W for each replication from the
/// observation stream of `seed`. Requires 0 < pi0 < 1.
[[nodiscard]] FilterOracleReport filter_oracle_check(const ModelParams& params, const GridSpec& grid,
                                                     std::uint64_t seed, std::size_t replications);

/// Draws (bull, dW) for one replication at resolution `grid`.
struct ObservationDraw {
    bool bull = false;
    std::vector<double> dW;
};
[[nodiscard]] ObservationDraw draw_observation(const ModelParams& params, const GridSpec& grid, std::uint64_t seed,
                                               std::size_t replication);

/// D_{k delta} log rho_T along one branch, evaluated directly:
///   -(b - r + gamma pi_k) - gamma S2 - gamma S3.
/// Multiply by rho_T for D rho_T.
[[nodiscard]] double direct_malliavin_log_rho(const BranchEnsemble& ensemble, std::size_t i, const MalliavinBranch& mall,
                                              const ModelParams& params, const GridSpec& grid);

}  // namespace mvdrift
