#include "mvdrift/path.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mvdrift {

GridSpec make_grid(double horizon, std::size_t n) {
    if (n < 1) throw std::invalid_argument("make_grid: n must be at least 1");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("make_grid: horizon must be positive");
    return GridSpec{n, horizon};
}

void EnsembleSpec::validate() const {
    if (m < 1) throw std::invalid_argument("EnsembleSpec: m must be at least 1");
    if (stride < 1) throw std::invalid_argument("EnsembleSpec: stride must be at least 1");
}

std::vector<std::size_t> evaluation_nodes(const GridSpec& grid, std::size_t stride) {
    if (stride < 1) throw std::invalid_argument("evaluation_nodes: stride must be at least 1");
    std::vector<std::size_t> nodes;
    for (std::size_t k = 0; k <= grid.n; k += stride) nodes.push_back(k);
    if (nodes.back() != grid.n) nodes.push_back(grid.n);
    return nodes;
}

std::vector<double> sample_increments(const StreamKey& key, const GridSpec& grid) {
    return sample_increments(key, grid, grid.n);
}

std::vector<double> sample_increments(const StreamKey& key, const GridSpec& grid, std::size_t count) {
    std::vector<double> out(count);
    NormalStream stream(key);
    stream.fill(out, std::sqrt(grid.delta()));
    return out;
}

std::vector<double> coarsen_increments(std::span<const double> fine, std::size_t factor) {
    if (factor < 1 || fine.size() % factor != 0) {
        throw std::invalid_argument("coarsen_increments: factor must divide the number of increments");
    }
    std::vector<double> coarse(fine.size() / factor, 0.0);
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        double s = 0.0;
        for (std::size_t q = 0; q < factor; ++q) s += fine[j * factor + q];
        coarse[j] = s;
    }
    return coarse;
}

OuterPath simulate_outer_path(const ModelParams& params, const GridSpec& grid, std::span<const double> dnu) {
    if (dnu.size() != grid.n) throw std::invalid_argument("simulate_outer_path: need exactly n increments");
    const double delta = grid.delta();
    const double gamma = params.gamma();

    OuterPath path;
    path.dnu.assign(dnu.begin(), dnu.end());
    path.pi.resize(grid.n + 1);
    path.lrho.resize(grid.n + 1);
    path.lphi.resize(grid.n + 1);
    path.pi[0] = params.pi0;
    path.lrho[0] = 0.0;
    path.lphi[0] = 0.0;
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double pi = path.pi[k];
        const double theta = params.excess_drift(pi);
        path.lrho[k + 1] = path.lrho[k] + log_rho_increment(pi, dnu[k], delta, params);
        path.lphi[k + 1] = path.lphi[k] + (theta * dnu[k] + (params.r + 0.5 * theta * theta) * delta);
        path.pi[k + 1] = euler_filter_step(pi, dnu[k], gamma);
    }
    return path;
}

OuterPath simulate_outer_path(const ModelParams& params, const GridSpec& grid, const StreamKey& key) {
    const auto dnu = sample_increments(key, grid);
    return simulate_outer_path(params, grid, dnu);
}

BranchEnsemble::BranchEnsemble(const OuterPath& outer, std::size_t root, std::size_t m)
    : outer_(&outer), root_(root), m_(m), len_(root <= outer.steps() ? outer.steps() - root : 0) {
    if (root > outer.steps()) throw std::invalid_argument("BranchEnsemble: root beyond the last node");
    dnu_.resize(m_ * len_);
    pi_.resize(m_ * (len_ + 1));
    lrho_.resize(m_ * (len_ + 1));
}

double BranchEnsemble::pi_at(std::size_t i, std::size_t l) const noexcept {
    return l <= root_ ? outer_->pi[l] : pi(i)[l - root_];
}

double BranchEnsemble::lrho_at(std::size_t i, std::size_t l) const noexcept {
    return l <= root_ ? outer_->lrho[l] : lrho(i)[l - root_];
}

double BranchEnsemble::rho_terminal(std::size_t i) const noexcept {
    return std::exp(lrho(i)[len_]);
}

BranchEnsemble grow_branch_ensemble(const OuterPath& outer, std::size_t k, const EnsembleSpec& spec,
                                    const ModelParams& params, const GridSpec& grid) {
    spec.validate();
    if (outer.steps() != grid.n) throw std::invalid_argument("grow_branch_ensemble: outer path does not match grid");
    if (k > grid.n) throw std::invalid_argument("grow_branch_ensemble: root index beyond n");

    BranchEnsemble ens(outer, k, spec.m);
    const double delta = grid.delta();
    const double gamma = params.gamma();
    const double sqrt_delta = std::sqrt(delta);
    for (std::size_t i = 0; i < spec.m; ++i) {
        auto dnu = ens.dnu(i);
        NormalStream(branch_stream(spec.master_seed, k, i)).fill(dnu, sqrt_delta);
        auto pi = ens.pi(i);
        auto lrho = ens.lrho(i);
        pi[0] = outer.pi[k];
        lrho[0] = outer.lrho[k];
        for (std::size_t l = 0; l < ens.length(); ++l) {
            lrho[l + 1] = lrho[l] + log_rho_increment(pi[l], dnu[l], delta, params);
            pi[l + 1] = euler_filter_step(pi[l], dnu[l], gamma);
        }
    }
    return ens;
}

}  // namespace mvdrift
