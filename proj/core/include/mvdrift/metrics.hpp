#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mvdrift {

/// Pointwise and integrated differences between an approximate and a reference
/// trajectory sampled at the same times.
struct ErrorReport {
    std::vector<double> times;
    std::vector<double> abs_error;
    std::vector<double> rel_error;
    double l2 = 0.0;      ///< trapezoidal L2-in-time norm of the difference
    double sup = 0.0;
    double rel_l2 = 0.0;  ///< l2 / (L2-in-time norm of the reference)
    std::size_t replications = 1;
    double l2_se = 0.0;   ///< standard error of l2 across replications (aggregates only)
};

/// Throws std::invalid_argument on length mismatch or empty input. With a
/// single time the L2 norm degenerates to the absolute error.
[[nodiscard]] ErrorReport error_report(std::span<const double> approx, std::span<const double> reference,
                                       std::span<const double> times);

/// Averages per-replication reports: pointwise mean errors, mean l2/sup/rel_l2,
/// and the standard error of l2.
[[nodiscard]] ErrorReport aggregate_reports(std::span<const ErrorReport> reports);

/// Log-log least-squares fit error = C * abscissa^slope.
struct ConvergenceFit {
    std::vector<double> abscissa;
    std::vector<double> error;
    double slope = 0.0;
    double intercept = 0.0;  ///< log C
    double r2 = 0.0;
};

/// Requires at least three points, all strictly positive.
[[nodiscard]] ConvergenceFit convergence_fit(std::span<const double> abscissa, std::span<const double> error);

/// Sample mean and its standard error.
struct MeanEstimate {
    double mean = 0.0;
    double se = 0.0;
    double variance = 0.0;  ///< unbiased sample variance
    std::size_t count = 0;
};

[[nodiscard]] MeanEstimate mean_with_error(std::span<const double> values);

/// Median (average of the middle pair for even sizes).
[[nodiscard]] double median(std::vector<double> values);

}  // namespace mvdrift
