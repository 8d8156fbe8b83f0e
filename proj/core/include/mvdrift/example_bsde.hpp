#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mvdrift/path.hpp"

namespace mvdrift {

// Linear BSDE with random coefficients and an explicit solution, used to test
// the nested Malliavin estimator against ground truth:
//
//   dX = ( -(1 - 2W - W^2) X / 2 - (1 + W) Z ) dt + Z dW,
//   X(T) = exp(H(T) - 2T),
//   H(t) = int_0^t (1 + W) dW - int_0^t (W^2 + 2W) ds,
//
// whose solution is X(t) = exp(H(t) - 2t), Z(t) = (1 + W(t)) X(t).
// With theta = exp(2 int (1 + W) dW - 2 int (1 + W)^2 ds) and Phi = exp(-H),
// X = Phi E(theta | F_t), and the martingale integrand of E(theta | F_t) is
// E(D_t theta | F_t) = E(theta [2 W(T) + 2 - 4 int_t^T (1 + W) ds] | F_t).

/// Left-endpoint discretisation of W, H and log theta along one path.
struct ExamplePath {
    std::vector<double> dW;
    std::vector<double> W;       ///< n + 1 nodes, W[0] = 0
    std::vector<double> H;       ///< n + 1 nodes
    std::vector<double> ltheta;  ///< running log of theta's exponent, n + 1 nodes
};

[[nodiscard]] ExamplePath make_example_path(const GridSpec& grid, std::span<const double> dW);

/// Values of (X, Z) at selected grid nodes.
struct ExampleTrajectory {
    std::vector<std::size_t> nodes;
    std::vector<double> times;
    std::vector<double> X;
    std::vector<double> Z;
};

/// Closed-form (X, Z) on every grid node, with H discretised by left-endpoint
/// sums on the supplied increments.
[[nodiscard]] ExampleTrajectory example_true_solution(std::span<const double> dW, const GridSpec& grid);

/// Branch averages of theta^i / theta_prefix and of that ratio times the
/// derivative bracket, from m continuations of W rooted at node k.
struct ExampleAverages {
    double ratio = 0.0;
    double ratio_bracket = 0.0;
};

[[nodiscard]] ExampleAverages example_branch_average(const GridSpec& grid, const ExamplePath& path, std::size_t k,
                                                     std::size_t m, std::uint64_t seed, StreamDomain domain,
                                                     unsigned threads = 1);

/// Nested Malliavin estimate at the given nodes:
///   X = Phi N,  Z = Phi eta - (1 + W) X,
/// where N and eta are the branch averages of theta and D_t theta.
[[nodiscard]] ExampleTrajectory example_solve_new(const GridSpec& grid, std::span<const double> dW, std::size_t m,
                                                  std::uint64_t seed, std::span<const std::size_t> nodes,
                                                  unsigned threads = 1);

/// Draws the driving path from the example_outer stream of `seed`, then
/// evaluates every stride-th node.
[[nodiscard]] ExampleTrajectory example_solve_new(const GridSpec& grid, std::size_t m, std::uint64_t seed,
                                                  std::size_t stride, unsigned threads = 1);

[[nodiscard]] inline StreamKey example_outer_stream(std::uint64_t seed) noexcept {
    return {seed, StreamDomain::example_outer, 0, 0};
}

}  // namespace mvdrift
