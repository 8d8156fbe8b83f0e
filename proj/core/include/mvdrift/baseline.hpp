#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mvdrift/example_bsde.hpp"
#include "mvdrift/path.hpp"

namespace mvdrift {

/// Double partition of [0, T]: n1 coarse steps, each split into n2 fine steps.
struct DoubleGrid {
    std::size_t n1 = 1;
    std::size_t n2 = 1;
    double horizon = 1.0;

    [[nodiscard]] std::size_t fine_steps() const noexcept { return n1 * n2; }
    [[nodiscard]] double delta1() const noexcept { return horizon / static_cast<double>(n1); }
    [[nodiscard]] double delta2() const noexcept { return horizon / static_cast<double>(n1 * n2); }
    [[nodiscard]] GridSpec coarse() const noexcept { return {n1, horizon}; }
    [[nodiscard]] GridSpec fine() const noexcept { return {n1 * n2, horizon}; }

    void validate() const;
};

/// Quadratic-covariation estimate of the martingale integrand over coarse
/// interval k (fine nodes (k-1) n2 .. k n2):
///
///   eta_1(k / n1) = n1 * sum_j (N_j - N_{j-1}) (W_j - W_{j-1}).
///
/// Requires 1 <= k <= n1 and fine arrays with n1 n2 + 1 entries.
[[nodiscard]] double old_eta(std::span<const double> N_fine, std::span<const double> W_fine, std::size_t k,
                             const DoubleGrid& dgrid);

/// Output of the double-partition scheme on the closed-form example.
struct OldExampleResult {
    std::vector<double> times;    ///< coarse nodes 0..n1
    std::vector<double> X;        ///< Phi^{delta1} N^{m, delta1} at coarse nodes
    std::vector<double> z_times;  ///< coarse nodes 1..n1
    std::vector<double> eta1;     ///< covariation estimate on each coarse interval
    std::vector<double> Z;        ///< Phi eta1 - (1 + W) X at z_times
    std::vector<double> N_fine;   ///< particle estimate of E(theta | F_t) at every fine node
};

/// Runs the double-partition scheme on fine increments dW_fine (n1 n2 of them):
/// re-roots m branches at every fine node to estimate N, differences it against
/// W over each coarse interval, and evaluates X on the coarse grid.
[[nodiscard]] OldExampleResult old_solve_example(const DoubleGrid& dgrid, std::span<const double> dW_fine,
                                                 std::size_t m, std::uint64_t seed, unsigned threads = 1);

/// Same, drawing the fine path from example_outer_stream(seed).
[[nodiscard]] OldExampleResult old_solve_example(const DoubleGrid& dgrid, std::size_t m, std::uint64_t seed,
                                                 unsigned threads = 1);

}  // namespace mvdrift
