#include "mvdrift/particle_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvdrift/parallel.hpp"

namespace mvdrift {

namespace {

double standard_error(double sum, double sum_sq, std::size_t count) {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return std::sqrt(var / n);
}

}  // namespace

namespace {

template <class NextIncrement>
BranchFunctionals run_branch(const ModelParams& params, const GridSpec& grid, std::size_t root, double pi_root,
                             double lrho_root, NextIncrement&& next) noexcept {
    const double delta = grid.delta();
    const double gamma = params.gamma();
    double pi = pi_root;
    double d = truncated_diffusion(pi_root, gamma);
    BranchFunctionals out{lrho_root, 0.0, 0.0};
    for (std::size_t l = root; l < grid.n; ++l) {
        const double dnu = next(l);
        out.s2 += d * dnu;
        out.s3 += delta * params.excess_drift(pi) * d;
        out.lrho_T += log_rho_increment(pi, dnu, delta, params);
        d = malliavin_pi_step(d, pi, dnu, gamma);
        pi = euler_filter_step(pi, dnu, gamma);
    }
    return out;
}

}  // namespace

BranchFunctionals simulate_branch(const ModelParams& params, const GridSpec& grid, std::size_t root, double pi_root,
                                  double lrho_root, const StreamKey& key) noexcept {
    const double sqrt_delta = std::sqrt(grid.delta());
    NormalStream stream(key);
    return run_branch(params, grid, root, pi_root, lrho_root, [&](std::size_t) { return sqrt_delta * stream.next(); });
}

BranchFunctionals simulate_branch(const ModelParams& params, const GridSpec& grid, std::size_t root, double pi_root,
                                  double lrho_root, std::span<const double> dnu) {
    if (root > grid.n || dnu.size() != grid.n - root) {
        throw std::invalid_argument("simulate_branch: need one increment per step after the root");
    }
    return run_branch(params, grid, root, pi_root, lrho_root, [&](std::size_t l) { return dnu[l - root]; });
}

BranchFunctionals branch_functionals(const BranchEnsemble& ensemble, std::size_t i, const MalliavinBranch& mall,
                                     const ModelParams& params, const GridSpec& grid) {
    const auto ints = branch_s2_s3(ensemble, i, mall, params, grid);
    return {ensemble.lrho(i)[ensemble.length()], ints.s2, ints.s3};
}

MomentEstimates estimate_rho_moments(const ModelParams& params, const GridSpec& grid, std::size_t m,
                                     std::uint64_t seed, unsigned threads) {
    if (m < 2) throw std::invalid_argument("estimate_rho_moments: need at least two paths");
    const double delta = grid.delta();
    const double sqrt_delta = std::sqrt(delta);
    const double gamma = params.gamma();

    std::vector<double> lrho_T(m);
    parallel_for(m, threads, [&](std::size_t i) {
        NormalStream stream(StreamKey{seed, StreamDomain::moments, 0, static_cast<std::uint32_t>(i)});
        double pi = params.pi0;
        double lrho = 0.0;
        for (std::size_t l = 0; l < grid.n; ++l) {
            const double dnu = sqrt_delta * stream.next();
            lrho += log_rho_increment(pi, dnu, delta, params);
            pi = euler_filter_step(pi, dnu, gamma);
        }
        lrho_T[i] = lrho;
    });

    double s1 = 0.0, s1sq = 0.0, s2 = 0.0, s2sq = 0.0;
    for (double lr : lrho_T) {
        const double rho = std::exp(lr);
        const double rho2 = std::exp(2.0 * lr);
        s1 += rho;
        s1sq += rho * rho;
        s2 += rho2;
        s2sq += rho2 * rho2;
    }
    MomentEstimates out;
    out.samples = m;
    out.e_rho = s1 / static_cast<double>(m);
    out.e_rho2 = s2 / static_cast<double>(m);
    out.var_rho = out.e_rho2 - out.e_rho * out.e_rho;
    out.se_rho = standard_error(s1, s1sq, m);
    out.se_rho2 = standard_error(s2, s2sq, m);
    return out;
}

NEstimates estimate_N(double pi_root, std::span<const BranchFunctionals> branches, const TerminalCoefficients& coeffs,
                      const ModelParams& params) {
    if (branches.empty()) throw std::invalid_argument("estimate_N: no branches");
    double sum_w = 0.0, sum_ws2 = 0.0, sum_ws3 = 0.0;
    for (const auto& br : branches) {
        const double rho = std::exp(br.lrho_T);
        const double w = coeffs.c1 * rho + 2.0 * coeffs.c2 * std::exp(2.0 * br.lrho_T);
        sum_w += w;
        sum_ws2 += w * br.s2;
        sum_ws3 += w * br.s3;
    }
    const double m = static_cast<double>(branches.size());
    return {-params.excess_drift(pi_root) * (sum_w / m), -(sum_ws2 / m), -(sum_ws3 / m)};
}

NodeEstimate combine_node(const ModelParams& params, const GridSpec& grid, const OuterPath& outer, std::size_t k,
                          std::span<const BranchFunctionals> branches, const TerminalCoefficients& coeffs) {
    const double gamma = params.gamma();
    NodeEstimate row;
    row.k = k;
    row.t = grid.time(k);
    row.pi = outer.pi[k];
    row.phi = std::exp(outer.lphi[k]);

    const auto ns = estimate_N(row.pi, branches, coeffs, params);
    row.N1 = ns.N1;
    row.N2 = ns.N2;
    row.N3 = ns.N3;
    row.eta = row.N1 + gamma * row.N2 + gamma * row.N3;

    const double theta_k = params.excess_drift(row.pi);
    double sum_theta = 0.0;
    double y_sum = 0.0, y_sq = 0.0, u_sum = 0.0, u_sq = 0.0;
    for (const auto& br : branches) {
        const double rho = std::exp(br.lrho_T);
        const double rho2 = std::exp(2.0 * br.lrho_T);
        const double th = coeffs.c1 * rho + coeffs.c2 * rho2;
        const double w = coeffs.c1 * rho + 2.0 * coeffs.c2 * rho2;
        sum_theta += th;
        const double y_i = row.phi * th;
        const double eta_i = -theta_k * w - gamma * w * br.s2 - gamma * w * br.s3;
        const double u_i = theta_k * y_i + row.phi * eta_i;
        y_sum += y_i;
        y_sq += y_i * y_i;
        u_sum += u_i;
        u_sq += u_i * u_i;
    }
    const double m = static_cast<double>(branches.size());
    row.Y = row.phi * (sum_theta / m);
    row.u = theta_k * row.Y + row.phi * row.eta;
    row.Y_se = standard_error(y_sum, y_sq, branches.size());
    row.u_se = standard_error(u_sum, u_sq, branches.size());
    return row;
}

NodeEstimate evaluate_node(const ModelParams& params, const GridSpec& grid, const OuterPath& outer, std::size_t k,
                           const EnsembleSpec& spec, const TerminalCoefficients& coeffs, unsigned threads) {
    spec.validate();
    if (k > grid.n) throw std::invalid_argument("evaluate_node: node beyond the grid");
    std::vector<BranchFunctionals> branches(spec.m);
    parallel_for(spec.m, threads, [&](std::size_t i) {
        branches[i] = simulate_branch(params, grid, k, outer.pi[k], outer.lrho[k], branch_stream(spec.master_seed, k, i));
    });
    return combine_node(params, grid, outer, k, branches, coeffs);
}

std::vector<double> SchemeOutput::column(double NodeEstimate::*field) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row.*field);
    return out;
}

SchemeOutput solve_on_path(const ModelParams& params, const GridSpec& grid, OuterPath outer, const EnsembleSpec& spec,
                           const TerminalCoefficients& coeffs, std::span<const std::size_t> nodes, unsigned threads) {
    if (outer.steps() != grid.n) throw std::invalid_argument("solve_on_path: outer path does not match grid");
    SchemeOutput out;
    out.coefficients = coeffs;
    out.path = std::move(outer);
    out.rows.reserve(nodes.size());
    for (std::size_t k : nodes) out.rows.push_back(evaluate_node(params, grid, out.path, k, spec, coeffs, threads));
    return out;
}

SchemeOutput solve_path(const ModelParams& params, const GridSpec& grid, const EnsembleSpec& spec,
                        const SolveOptions& options) {
    params.validate();
    spec.validate();
    const TerminalCoefficients coeffs =
        options.coefficients
            ? *options.coefficients
            : compute_c1_c2(estimate_rho_moments(params, grid, options.moment_paths, spec.master_seed, options.threads),
                            params);
    const auto nodes = options.nodes.empty() ? evaluation_nodes(grid, spec.stride) : options.nodes;
    return solve_on_path(params, grid, simulate_outer_path(params, grid, outer_stream(spec.master_seed)), spec, coeffs,
                         nodes, options.threads);
}

}  // namespace mvdrift
