#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mvdrift/model.hpp"
#include "mvdrift/path.hpp"

namespace mvdrift {

/// One Euler step of the linear SDE for D_t pi_s:
/// dpi * (1 + gamma (1 - 2 pi_prev) dnu).
[[nodiscard]] inline double malliavin_pi_step(double dpi, double pi_prev, double dnu, double gamma) noexcept {
    return dpi * (1.0 + gamma * (1.0 - 2.0 * pi_prev) * dnu);
}

/// Discrete Malliavin derivative D_{k delta} pi^i(l delta, k delta) along one
/// branch, for l = root..n.
struct MalliavinBranch {
    std::size_t root = 0;
    double seed = 0.0;           ///< truncated_diffusion(pi at the root)
    std::vector<double> values;  ///< values[l - root]; values[0] == seed
};

/// Runs the derivative recursion along branch i of `ensemble`, seeded with
/// the truncated diffusion at the root (zero once the root leaves [0, 1]).
[[nodiscard]] MalliavinBranch malliavin_branch(const BranchEnsemble& ensemble, std::size_t i, double gamma);

/// Closed-form solution of the derivative SDE evaluated on a discrete path:
///
///   gamma pi_t (1 - pi_t) exp( sum gamma (1 - 2 pi_r) dnu_r
///                              - 1/2 sum gamma^2 (1 - 2 pi_r)^2 delta ),
///
/// with left-endpoint sums over the supplied steps. `pi` holds node values
/// from t to s (one more entry than `dnu`). Cross-check oracle only.
[[nodiscard]] double continuous_malliavin_pi(std::span<const double> pi, std::span<const double> dnu, double gamma,
                                             double delta);

/// Discrete stochastic and Lebesgue integrals of the derivative along a branch.
struct BranchIntegrals {
    double s2 = 0.0;  ///< sum D_l dnu_l
    double s3 = 0.0;  ///< sum delta (b - r + gamma pi_l) D_l
};

/// S2 and S3 for branch i, using left-endpoint values and the increments that
/// drove the branch. Throws std::invalid_argument if the roots differ.
[[nodiscard]] BranchIntegrals branch_s2_s3(const BranchEnsemble& ensemble, std::size_t i, const MalliavinBranch& mall,
                                           const ModelParams& params, const GridSpec& grid);

/// theta = c1 rho_T + c2 rho_T^2 and the weight c1 rho_T + 2 c2 rho_T^2 that
/// multiplies the derivative structure of rho_T in D_t theta.
struct ThetaWeights {
    double theta = 0.0;
    double weight = 0.0;
};

[[nodiscard]] inline ThetaWeights theta_and_derivative(double rho_T, double c1, double c2) noexcept {
    const double rho2 = rho_T * rho_T;
    return {c1 * rho_T + c2 * rho2, c1 * rho_T + 2.0 * c2 * rho2};
}

}  // namespace mvdrift
