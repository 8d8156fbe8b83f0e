#include "mvdrift/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <stdexcept>

namespace mvdrift {

namespace {

void require_degenerate_prior(const ModelParams& params, const char* where) {
    if (params.pi0 != 0.0 && params.pi0 != 1.0) {
        throw std::invalid_argument(std::string(where) + ": requires pi0 in {0, 1}");
    }
}

double known_drift(const ModelParams& params) { return params.pi0 == 1.0 ? params.a : params.b; }

}  // namespace

MomentEstimates constant_drift_moments(const ModelParams& params) {
    require_degenerate_prior(params, "constant_drift_moments");
    const double theta = known_drift(params) - params.r;
    MomentEstimates m;
    m.e_rho = std::exp(-params.r * params.horizon);
    m.e_rho2 = std::exp((theta * theta - 2.0 * params.r) * params.horizon);
    m.var_rho = m.e_rho2 - m.e_rho * m.e_rho;
    return m;
}

ConstantDriftSolution constant_drift_oracle(const ModelParams& params, const GridSpec& grid, const OuterPath& outer,
                                            const TerminalCoefficients& coeffs, std::span<const std::size_t> nodes) {
    require_degenerate_prior(params, "constant_drift_oracle");
    if (outer.steps() != grid.n) throw std::invalid_argument("constant_drift_oracle: outer path does not match grid");
    const double theta = known_drift(params) - params.r;
    ConstantDriftSolution sol;
    for (std::size_t k : nodes) {
        if (k > grid.n) throw std::invalid_argument("constant_drift_oracle: node beyond the grid");
        const double t = grid.time(k);
        const double tau = params.horizon - t;
        const double rho_t = std::exp(outer.lrho[k]);
        const double second = coeffs.c2 * rho_t * std::exp((theta * theta - 2.0 * params.r) * tau);
        sol.times.push_back(t);
        sol.Y.push_back(coeffs.c1 * std::exp(-params.r * tau) + second);
        sol.u.push_back(-theta * second);
    }
    return sol;
}

FilterComparison compare_filter_on_path(const ModelParams& params, const GridSpec& grid, bool bull,
                                        std::span<const double> dW) {
    if (dW.size() != grid.n) throw std::invalid_argument("compare_filter_on_path: need exactly n increments");
    const double delta = grid.delta();
    const double gamma = params.gamma();
    const double mu = bull ? params.a : params.b;

    FilterComparison cmp;
    cmp.dnu.resize(grid.n);
    cmp.pi_euler.resize(grid.n + 1);
    cmp.pi_exact.resize(grid.n + 1);
    cmp.pi_euler[0] = params.pi0;
    cmp.pi_exact[0] = params.pi0;
    double log_price = 0.0;
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double dL = (mu - 0.5) * delta + dW[k];
        log_price += dL;
        const double pi = cmp.pi_euler[k];
        cmp.dnu[k] = dL - (params.b - 0.5 + gamma * pi) * delta;
        cmp.pi_euler[k + 1] = euler_filter_step(pi, cmp.dnu[k], gamma);
        cmp.pi_exact[k + 1] = exact_posterior(params.pi0, log_price, grid.time(k + 1), params);
        cmp.sup_error = std::max(cmp.sup_error, std::abs(cmp.pi_euler[k + 1] - cmp.pi_exact[k + 1]));
    }
    return cmp;
}

ObservationDraw draw_observation(const ModelParams& params, const GridSpec& grid, std::uint64_t seed,
                                 std::size_t replication) {
    NormalStream stream(StreamKey{seed, StreamDomain::observation, 0, static_cast<std::uint32_t>(replication)});
    ObservationDraw draw;
    draw.bull = stream.uniform() < params.pi0;
    draw.dW.resize(grid.n);
    stream.fill(draw.dW, std::sqrt(grid.delta()));
    return draw;
}

FilterOracleReport filter_oracle_check(const ModelParams& params, const GridSpec& grid, std::uint64_t seed,
                                       std::size_t replications) {
    params.validate();
    if (!(params.pi0 > 0.0 && params.pi0 < 1.0)) throw std::invalid_argument("filter_oracle_check: requires 0 < pi0 < 1");
    if (replications < 1) throw std::invalid_argument("filter_oracle_check: need at least one replication");

    FilterOracleReport rep;
    std::vector<double> pooled;
    pooled.reserve(replications * grid.n);
    for (std::size_t r = 0; r < replications; ++r) {
        const auto draw = draw_observation(params, grid, seed, r);
        const auto cmp = compare_filter_on_path(params, grid, draw.bull, draw.dW);
        rep.sup_errors.push_back(cmp.sup_error);
        pooled.insert(pooled.end(), cmp.dnu.begin(), cmp.dnu.end());
    }
    rep.sup_error = mean_with_error(rep.sup_errors);
    rep.nu_mean = mean_with_error(pooled);
    rep.nu_variance = rep.nu_mean.variance;
    rep.increments = pooled.size();
    rep.nu_variance_se = pooled.size() > 1 ? grid.delta() * std::sqrt(2.0 / static_cast<double>(pooled.size() - 1)) : 0.0;
    return rep;
}

double direct_malliavin_log_rho(const BranchEnsemble& ensemble, std::size_t i, const MalliavinBranch& mall,
                                const ModelParams& params, const GridSpec& grid) {
    const auto ints = branch_s2_s3(ensemble, i, mall, params, grid);
    const double gamma = params.gamma();
    return -params.excess_drift(ensemble.pi(i)[0]) - gamma * ints.s2 - gamma * ints.s3;
}

}  // namespace mvdrift
