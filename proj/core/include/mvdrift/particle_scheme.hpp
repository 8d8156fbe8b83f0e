#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mvdrift/malliavin.hpp"
#include "mvdrift/model.hpp"
#include "mvdrift/path.hpp"

namespace mvdrift {

/// Per-branch quantities needed by the nested estimator: log rho^i(T, k delta)
/// and the two derivative integrals S2, S3.
struct BranchFunctionals {
    double lrho_T = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
};

/// Simulates one branch rooted at outer node `root` without storing it.
/// Produces bit-identical results to grow_branch_ensemble + malliavin_branch +
/// branch_s2_s3 for the same stream key.
[[nodiscard]] BranchFunctionals simulate_branch(const ModelParams& params, const GridSpec& grid, std::size_t root,
                                                double pi_root, double lrho_root, const StreamKey& key) noexcept;

/// Same, driven by caller-supplied increments dnu[l - root] for l = root..n-1.
/// Used to couple branches across grid levels.
[[nodiscard]] BranchFunctionals simulate_branch(const ModelParams& params, const GridSpec& grid, std::size_t root,
                                                double pi_root, double lrho_root, std::span<const double> dnu);

/// Same quantities computed from a materialised ensemble.
[[nodiscard]] BranchFunctionals branch_functionals(const BranchEnsemble& ensemble, std::size_t i,
                                                   const MalliavinBranch& mall, const ModelParams& params,
                                                   const GridSpec& grid);

/// Sample mean of rho_T and rho_T^2 over m full-horizon paths drawn from the
/// `moments` stream domain, so they never share noise with a pricing ensemble.
/// Requires m >= 2.
[[nodiscard]] MomentEstimates estimate_rho_moments(const ModelParams& params, const GridSpec& grid, std::size_t m,
                                                   std::uint64_t seed, unsigned threads = 1);

/// Branch averages behind eta = N1 + gamma N2 + gamma N3, with
/// w_i = c1 rho_i + 2 c2 rho_i^2:
///
///   N1 = -(b - r + gamma pi_k) mean(w_i)
///   N2 = -mean(w_i S2_i)
///   N3 = -mean(w_i S3_i)
///
/// The stochastic integral enters D_t log rho_T with a negative sign
/// (D_t of -int theta dnu), which is why N2 carries one.
struct NEstimates {
    double N1 = 0.0;
    double N2 = 0.0;
    double N3 = 0.0;
};

[[nodiscard]] NEstimates estimate_N(double pi_root, std::span<const BranchFunctionals> branches,
                                    const TerminalCoefficients& coeffs, const ModelParams& params);

/// Estimator values at one outer node.
struct NodeEstimate {
    std::size_t k = 0;
    double t = 0.0;
    double pi = 0.0;
    double phi = 0.0;  ///< Phi_k = exp(log Phi_k)
    double N1 = 0.0;
    double N2 = 0.0;
    double N3 = 0.0;
    double eta = 0.0;
    double Y = 0.0;
    double u = 0.0;
    double Y_se = 0.0;  ///< Monte Carlo standard error across branches
    double u_se = 0.0;
};

/// Combines branch functionals into a NodeEstimate. Y uses theta's weights
/// (c1, c2); eta uses those of D theta (c1, 2 c2).
[[nodiscard]] NodeEstimate combine_node(const ModelParams& params, const GridSpec& grid, const OuterPath& outer,
                                        std::size_t k, std::span<const BranchFunctionals> branches,
                                        const TerminalCoefficients& coeffs);

/// Grows spec.m branches at node k (streams keyed by spec.master_seed) and
/// evaluates the estimator there. Branches run on `threads` workers; the
/// result does not depend on the worker count.
[[nodiscard]] NodeEstimate evaluate_node(const ModelParams& params, const GridSpec& grid, const OuterPath& outer,
                                         std::size_t k, const EnsembleSpec& spec, const TerminalCoefficients& coeffs,
                                         unsigned threads = 1);

struct SolveOptions {
    std::size_t moment_paths = 20000;
    unsigned threads = 1;
    /// Use these instead of estimating moments (convergence studies hold them fixed).
    std::optional<TerminalCoefficients> coefficients;
    /// Explicit evaluation nodes; empty means evaluation_nodes(grid, spec.stride).
    std::vector<std::size_t> nodes;
};

struct SchemeOutput {
    std::vector<NodeEstimate> rows;
    TerminalCoefficients coefficients;
    OuterPath path;

    [[nodiscard]] std::vector<double> column(double NodeEstimate::*field) const;
};

/// Estimates (c1, c2), simulates the outer path from outer_stream(seed) and
/// evaluates every requested node.
[[nodiscard]] SchemeOutput solve_path(const ModelParams& params, const GridSpec& grid, const EnsembleSpec& spec,
                                      const SolveOptions& options = {});

/// As solve_path but on a caller-supplied outer path and fixed coefficients.
[[nodiscard]] SchemeOutput solve_on_path(const ModelParams& params, const GridSpec& grid, OuterPath outer,
                                         const EnsembleSpec& spec, const TerminalCoefficients& coeffs,
                                         std::span<const std::size_t> nodes, unsigned threads = 1);

}  // namespace mvdrift
