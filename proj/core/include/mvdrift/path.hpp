#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mvdrift/model.hpp"
#include "mvdrift/random.hpp"

namespace mvdrift {

/// Uniform time grid t_k = k T / n, k = 0..n. Stores n and T; the step is
/// derived so that n * delta reproduces T.
struct GridSpec {
    std::size_t n = 1;
    double horizon = 1.0;

    [[nodiscard]] double delta() const noexcept { return horizon / static_cast<double>(n); }
    [[nodiscard]] double time(std::size_t k) const noexcept {
        return horizon * static_cast<double>(k) / static_cast<double>(n);
    }
    [[nodiscard]] std::size_t nodes() const noexcept { return n + 1; }
};

/// Throws std::invalid_argument unless n >= 1 and horizon > 0.
[[nodiscard]] GridSpec make_grid(double horizon, std::size_t n);

/// Particle configuration for the nested estimator.
struct EnsembleSpec {
    std::size_t m = 1000;            ///< branches per evaluated outer node
    std::uint64_t master_seed = 1;
    std::size_t stride = 1;          ///< evaluate every stride-th outer node

    void validate() const;
};

/// Outer-grid nodes evaluated for a given stride: 0, s, 2s, ... and always n.
[[nodiscard]] std::vector<std::size_t> evaluation_nodes(const GridSpec& grid, std::size_t stride);

[[nodiscard]] inline StreamKey outer_stream(std::uint64_t seed) noexcept {
    return {seed, StreamDomain::outer, 0, 0};
}
[[nodiscard]] inline StreamKey branch_stream(std::uint64_t seed, std::size_t root, std::size_t branch) noexcept {
    return {seed, StreamDomain::branch, static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(branch)};
}

/// `count` i.i.d. N(0, delta) increments from the stream `key`
/// (count defaults to grid.n).
[[nodiscard]] std::vector<double> sample_increments(const StreamKey& key, const GridSpec& grid);
[[nodiscard]] std::vector<double> sample_increments(const StreamKey& key, const GridSpec& grid, std::size_t count);

/// Sums consecutive groups of `factor` increments, coupling a coarse grid to a
/// finer one driven by the same Brownian path.
[[nodiscard]] std::vector<double> coarsen_increments(std::span<const double> fine, std::size_t factor);

/// pi + truncated_diffusion(pi, gamma) * dnu. No clamping: a value that leaves
/// [0, 1] stays frozen there.
[[nodiscard]] inline double euler_filter_step(double pi, double dnu, double gamma) noexcept {
    return pi + truncated_diffusion(pi, gamma) * dnu;
}

/// Euler discretisation of the filter, log state-price density and log of its
/// inverse along one innovation path.
struct OuterPath {
    std::vector<double> dnu;   ///< n increments
    std::vector<double> pi;    ///< n + 1 filter values
    std::vector<double> lrho;  ///< n + 1 values of log rho
    std::vector<double> lphi;  ///< n + 1 values of log Phi

    [[nodiscard]] std::size_t steps() const noexcept { return dnu.size(); }
};

[[nodiscard]] OuterPath simulate_outer_path(const ModelParams& params, const GridSpec& grid, std::span<const double> dnu);
[[nodiscard]] OuterPath simulate_outer_path(const ModelParams& params, const GridSpec& grid, const StreamKey& key);

/// Continuations of (pi, log rho) from outer node `root` along m independent
/// innovation paths.
///
/// Values at nodes l <= root are not copied: pi_at/lrho_at read them from the
/// outer path, which must outlive the ensemble.
class BranchEnsemble {
public:
    BranchEnsemble(const OuterPath& outer, std::size_t root, std::size_t m);

    [[nodiscard]] std::size_t root() const noexcept { return root_; }
    [[nodiscard]] std::size_t size() const noexcept { return m_; }
    /// Number of continuation steps n - root.
    [[nodiscard]] std::size_t length() const noexcept { return len_; }
    [[nodiscard]] std::size_t last_node() const noexcept { return root_ + len_; }

    /// Increments driving branch i over [l, l+1] for l = root..n-1.
    [[nodiscard]] std::span<const double> dnu(std::size_t i) const noexcept { return {dnu_.data() + i * len_, len_}; }
    [[nodiscard]] std::span<double> dnu(std::size_t i) noexcept { return {dnu_.data() + i * len_, len_}; }
    /// Branch values at nodes root..n (first entry is the shared root value).
    [[nodiscard]] std::span<const double> pi(std::size_t i) const noexcept { return {pi_.data() + i * (len_ + 1), len_ + 1}; }
    [[nodiscard]] std::span<double> pi(std::size_t i) noexcept { return {pi_.data() + i * (len_ + 1), len_ + 1}; }
    [[nodiscard]] std::span<const double> lrho(std::size_t i) const noexcept { return {lrho_.data() + i * (len_ + 1), len_ + 1}; }
    [[nodiscard]] std::span<double> lrho(std::size_t i) noexcept { return {lrho_.data() + i * (len_ + 1), len_ + 1}; }

    /// pi^i(l, root) for any node l in 0..n.
    [[nodiscard]] double pi_at(std::size_t i, std::size_t l) const noexcept;
    [[nodiscard]] double lrho_at(std::size_t i, std::size_t l) const noexcept;
    /// exp of log rho^i at the terminal node.
    [[nodiscard]] double rho_terminal(std::size_t i) const noexcept;

    [[nodiscard]] const OuterPath& outer() const noexcept { return *outer_; }

private:
    const OuterPath* outer_;
    std::size_t root_;
    std::size_t m_;
    std::size_t len_;
    std::vector<double> dnu_;
    std::vector<double> pi_;
    std::vector<double> lrho_;
};

/// Grows m branches rooted at outer node k. Branch i is driven by
/// branch_stream(spec.master_seed, k, i).
[[nodiscard]] BranchEnsemble grow_branch_ensemble(const OuterPath& outer, std::size_t k, const EnsembleSpec& spec,
                                                  const ModelParams& params, const GridSpec& grid);

}  // namespace mvdrift
