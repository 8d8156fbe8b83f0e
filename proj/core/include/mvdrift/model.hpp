#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvdrift {

/// Raised when Var(rho_T) is numerically zero, i.e. the state-price density is
/// almost surely constant and the mean-variance frontier is undefined.
class DegenerateVarianceError : public std::runtime_error {
public:
    explicit DegenerateVarianceError(const std::string& what) : std::runtime_error(what) {}
};

/// Market with a stock whose drift is either `a` (bull) or `b` (bear), unit
/// volatility, and a money account paying `r`.
///
/// Units: rates are per unit time, `y0` and `z` in currency, `horizon` in time.
struct ModelParams {
    double a = 0.04;       ///< bull drift
    double b = 0.032;      ///< bear drift
    double r = 0.03;       ///< risk-free rate
    double pi0 = 0.1;      ///< prior P(mu = a)
    double y0 = 100.0;     ///< initial wealth
    double z = 106.0;      ///< target expected terminal wealth
    double horizon = 1.0;  ///< T

    /// Drift gap a - b.
    [[nodiscard]] double gamma() const noexcept { return a - b; }

    /// Filtered excess drift b - r + gamma * pi. Appears in rho, Phi and u.
    [[nodiscard]] double excess_drift(double pi) const noexcept { return b - r + gamma() * pi; }

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

/// The market used throughout the numerical experiments: r = 0.03, a = 0.04,
/// b = 0.032, y0 = 100, pi0 = 0.1, z = y0 (1 + r + 0.03), T = 1.
[[nodiscard]] ModelParams default_market();

/// Sample moments of rho_T with their Monte Carlo standard errors.
struct MomentEstimates {
    double e_rho = 0.0;
    double e_rho2 = 0.0;
    double var_rho = 0.0;  ///< e_rho2 - e_rho^2
    double se_rho = 0.0;
    double se_rho2 = 0.0;
    std::size_t samples = 0;
};

/// Terminal wealth v = c1 + c2 rho_T of the efficient strategy.
struct TerminalCoefficients {
    double c1 = 0.0;
    double c2 = 0.0;
    MomentEstimates moments;
};

/// Var(rho_T) at or below this is treated as degenerate.
inline constexpr double kDegenerateVariance = 1e-12;

/// gamma x (1 - x) on [0, 1], zero elsewhere.
[[nodiscard]] double truncated_diffusion(double x, double gamma) noexcept;

/// One Euler increment of log rho:
/// -(b - r + gamma pi) dnu - (r + (b - r + gamma pi)^2 / 2) delta.
[[nodiscard]] double log_rho_increment(double pi, double dnu, double delta, const ModelParams& params) noexcept;

/// Bayes posterior P(mu = a | L_t = log_price) for a prior `pi0`.
///
/// The likelihood ratio of drift (a - 1/2) against (b - 1/2) given the
/// log-price is exp(gamma L - gamma (a + b - 1) t / 2). The ratio is combined
/// with the prior in log-odds space, so large |gamma L| cannot overflow.
[[nodiscard]] double exact_posterior(double pi0, double log_price, double t, const ModelParams& params);

/// c1 = (z E rho^2 - y0 E rho) / Var, c2 = (y0 - z E rho) / Var.
///
/// Throws DegenerateVarianceError when var_rho <= kDegenerateVariance.
[[nodiscard]] TerminalCoefficients compute_c1_c2(const MomentEstimates& moments, const ModelParams& params);

}  // namespace mvdrift
