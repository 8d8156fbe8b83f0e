#include "mvdrift/studies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mvdrift/baseline.hpp"
#include "mvdrift/example_bsde.hpp"
#include "mvdrift/oracles.hpp"
#include "mvdrift/parallel.hpp"
#include "mvdrift/particle_scheme.hpp"
#include "mvdrift/path.hpp"

namespace mvdrift {

namespace {

std::size_t node_at(double t, const GridSpec& grid) {
    const double x = t / grid.horizon * static_cast<double>(grid.n);
    const double k = std::round(x);
    if (std::abs(x - k) > 1e-9 || k < 0.0 || k > static_cast<double>(grid.n)) {
        throw std::invalid_argument("evaluation time is not a node of every grid level");
    }
    return static_cast<std::size_t>(k);
}

struct Level {
    std::size_t n = 0;
    std::size_t m = 0;
};

// Y and u for every level at every time, one outer replication. Index
// [level][time].
struct LevelValues {
    std::vector<std::vector<double>> Y;
    std::vector<std::vector<double>> u;
};

LevelValues coupled_levels(const ModelParams& params, const TerminalCoefficients& coeffs, std::uint64_t rep_seed,
                           std::span<const Level> levels, std::span<const double> times, double horizon,
                           unsigned threads) {
    std::size_t n_ref = 0, m_ref = 0;
    for (const auto& lv : levels) {
        n_ref = std::max(n_ref, lv.n);
        m_ref = std::max(m_ref, lv.m);
    }
    for (const auto& lv : levels) {
        if (n_ref % lv.n != 0) throw std::invalid_argument("rate_study: every n must divide the reference n");
    }
    const GridSpec fine{n_ref, horizon};
    const auto dnu_fine = sample_increments(outer_stream(rep_seed), fine);

    std::vector<GridSpec> grids;
    std::vector<OuterPath> outers;
    for (const auto& lv : levels) {
        grids.push_back({lv.n, horizon});
        outers.push_back(simulate_outer_path(params, grids.back(), coarsen_increments(dnu_fine, n_ref / lv.n)));
    }

    LevelValues out;
    out.Y.assign(levels.size(), std::vector<double>(times.size()));
    out.u.assign(levels.size(), std::vector<double>(times.size()));
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const std::size_t k_fine = node_at(times[ti], fine);
        // branches[level][i]
        std::vector<std::vector<BranchFunctionals>> branches(levels.size());
        for (std::size_t l = 0; l < levels.size(); ++l) branches[l].resize(levels[l].m);

        parallel_for(m_ref, threads, [&](std::size_t i) {
            const auto inc = sample_increments(branch_stream(rep_seed, k_fine, i), fine, n_ref - k_fine);
            for (std::size_t l = 0; l < levels.size(); ++l) {
                if (i >= levels[l].m) continue;
                const std::size_t factor = n_ref / levels[l].n;
                const std::size_t k = k_fine / factor;
                const auto coarse = coarsen_increments(inc, factor);
                branches[l][i] =
                    simulate_branch(params, grids[l], k, outers[l].pi[k], outers[l].lrho[k], coarse);
            }
        });
        for (std::size_t l = 0; l < levels.size(); ++l) {
            const std::size_t k = node_at(times[ti], grids[l]);
            const auto row = combine_node(params, grids[l], outers[l], k, branches[l], coeffs);
            out.Y[l][ti] = row.Y;
            out.u[l][ti] = row.u;
        }
    }
    return out;
}

// RMS over replications and times of each level minus the last (reference) level.
std::pair<std::vector<double>, std::vector<double>> sweep_errors(const RateStudyConfig& cfg, const ModelParams& params,
                                                                 const TerminalCoefficients& coeffs,
                                                                 std::span<const Level> levels, std::uint64_t stream) {
    const std::size_t tested = levels.size() - 1;
    std::vector<double> ey(tested, 0.0), eu(tested, 0.0);
    for (std::size_t j = 0; j < cfg.replications; ++j) {
        const auto vals = coupled_levels(params, coeffs, derive_seed(derive_seed(cfg.master_seed, stream), j), levels,
                                         cfg.eval_times, params.horizon, cfg.threads);
        for (std::size_t l = 0; l < tested; ++l) {
            for (std::size_t ti = 0; ti < cfg.eval_times.size(); ++ti) {
                const double dy = vals.Y[l][ti] - vals.Y[tested][ti];
                const double du = vals.u[l][ti] - vals.u[tested][ti];
                ey[l] += dy * dy;
                eu[l] += du * du;
            }
        }
    }
    const double count = static_cast<double>(cfg.replications * cfg.eval_times.size());
    for (std::size_t l = 0; l < tested; ++l) {
        ey[l] = std::sqrt(ey[l] / count);
        eu[l] = std::sqrt(eu[l] / count);
    }
    return {ey, eu};
}

}  // namespace

ExampleStudyResult example_study(const ExampleStudyConfig& cfg, bool with_baseline) {
    if (cfg.seeds < 1) throw std::invalid_argument("example_study: need at least one seed");
    if (with_baseline && (cfg.n2 < 1 || cfg.n % cfg.n2 != 0 || cfg.n / cfg.n2 < 2)) {
        throw std::invalid_argument("example_study: n2 must divide n with at least two coarse steps");
    }
    const GridSpec grid = make_grid(1.0, cfg.n);
    const auto nodes = evaluation_nodes(grid, cfg.stride);

    ExampleStudyResult res;
    std::vector<double> xs, zs;
    for (std::size_t s = 0; s < cfg.seeds; ++s) {
        ExampleSeedResult sr;
        sr.seed = derive_seed(cfg.master_seed, s);
        const auto dW = sample_increments(example_outer_stream(sr.seed), grid);
        const auto truth = example_true_solution(dW, grid);
        const auto sol = example_solve_new(grid, dW, cfg.m, sr.seed, nodes, cfg.threads);

        std::vector<double> tx, tz;
        for (std::size_t k : sol.nodes) {
            tx.push_back(truth.X[k]);
            tz.push_back(truth.Z[k]);
        }
        sr.x_rel_l2 = error_report(sol.X, tx, sol.times).rel_l2;
        sr.z_rel_l2 = error_report(sol.Z, tz, sol.times).rel_l2;
        sr.estimate = sol;
        sr.X_true = std::move(tx);
        sr.Z_true = std::move(tz);

        if (with_baseline) {
            const DoubleGrid dgrid{cfg.n / cfg.n2, cfg.n2, 1.0};
            const auto old = old_solve_example(dgrid, dW, cfg.m, sr.seed, cfg.threads);
            // Interior coarse nodes; both schemes are exact at T.
            std::vector<std::size_t> coarse_nodes;
            for (std::size_t k = 1; k < dgrid.n1; ++k) coarse_nodes.push_back(k * cfg.n2);
            const auto fresh = example_solve_new(grid, dW, cfg.m, sr.seed, coarse_nodes, cfg.threads);
            std::vector<double> z_old, z_true, times;
            for (std::size_t k = 1; k < dgrid.n1; ++k) {
                z_old.push_back(old.Z[k - 1]);
                z_true.push_back(truth.Z[k * cfg.n2]);
                times.push_back(old.z_times[k - 1]);
            }
            sr.z_new_l2 = error_report(fresh.Z, z_true, times).l2;
            sr.z_old_l2 = error_report(z_old, z_true, times).l2;
            if (sr.z_new_l2 < sr.z_old_l2) ++res.new_wins;
        }
        xs.push_back(sr.x_rel_l2);
        zs.push_back(sr.z_rel_l2);
        res.seeds.push_back(sr);
    }
    res.median_x_rel_l2 = median(xs);
    res.median_z_rel_l2 = median(zs);
    return res;
}

ModelParams delta_sweep_market() {
    ModelParams p;
    p.a = 1.0;
    p.b = -1.0;
    p.r = 0.0;
    p.pi0 = 0.5;
    p.y0 = 1.0;
    p.z = 1.5;
    p.horizon = 1.0;
    return p;
}

ModelParams m_sweep_market() {
    auto p = delta_sweep_market();
    p.a = 1.2;
    p.b = 0.8;
    return p;
}

RateStudyResult rate_study(const RateStudyConfig& cfg) {
    cfg.delta_params.validate();
    cfg.m_params.validate();
    if (cfg.delta_levels.size() < 3 || cfg.m_levels.size() < 3) {
        throw std::invalid_argument("rate_study: need at least three levels per sweep");
    }
    if (cfg.replications < 1 || cfg.eval_times.empty()) throw std::invalid_argument("rate_study: empty study");

    RateStudyResult res;
    const std::size_t n_max = *std::max_element(cfg.delta_levels.begin(), cfg.delta_levels.end());
    const GridSpec delta_ref{8 * n_max, cfg.delta_params.horizon};
    res.delta_coefficients = compute_c1_c2(
        estimate_rho_moments(cfg.delta_params, delta_ref, cfg.moment_paths, cfg.master_seed, cfg.threads),
        cfg.delta_params);

    std::vector<Level> dlevels;
    std::vector<double> deltas;
    for (std::size_t n : cfg.delta_levels) {
        dlevels.push_back({n, cfg.delta_m});
        deltas.push_back(cfg.delta_params.horizon / static_cast<double>(n));
    }
    dlevels.push_back({8 * n_max, 8 * cfg.delta_m});
    const auto [dy, du] = sweep_errors(cfg, cfg.delta_params, res.delta_coefficients, dlevels, 1);
    res.series.push_back({"Y_vs_delta", convergence_fit(deltas, dy)});
    res.series.push_back({"u_vs_delta", convergence_fit(deltas, du)});

    const GridSpec m_ref{8 * cfg.m_study_n, cfg.m_params.horizon};
    res.m_coefficients = compute_c1_c2(
        estimate_rho_moments(cfg.m_params, m_ref, cfg.moment_paths, cfg.master_seed, cfg.threads), cfg.m_params);
    std::vector<Level> mlevels;
    std::vector<double> inv_m;
    for (std::size_t m : cfg.m_levels) {
        mlevels.push_back({cfg.m_study_n, m});
        inv_m.push_back(1.0 / static_cast<double>(m));
    }
    const std::size_t m_max = *std::max_element(cfg.m_levels.begin(), cfg.m_levels.end());
    mlevels.push_back({8 * cfg.m_study_n, 8 * m_max});
    const auto [my, mu] = sweep_errors(cfg, cfg.m_params, res.m_coefficients, mlevels, 2);
    res.series.push_back({"Y_vs_inv_m", convergence_fit(inv_m, my)});
    res.series.push_back({"u_vs_inv_m", convergence_fit(inv_m, mu)});
    return res;
}

BudgetStudyResult budget_study(const BudgetStudyConfig& cfg) {
    cfg.params.validate();
    if (cfg.replications < 2) throw std::invalid_argument("budget_study: need at least two replications");
    const GridSpec grid = make_grid(cfg.params.horizon, cfg.n);
    BudgetStudyResult res;
    res.coefficients = compute_c1_c2(
        estimate_rho_moments(cfg.params, grid, cfg.moment_paths, cfg.master_seed, cfg.threads), cfg.params);

    std::vector<double> rho_y(cfg.replications), y(cfg.replications);
    const EnsembleSpec spec{1, cfg.master_seed, 1};
    parallel_for(cfg.replications, cfg.threads, [&](std::size_t j) {
        const auto outer = simulate_outer_path(cfg.params, grid, outer_stream(derive_seed(cfg.master_seed, j)));
        // At the terminal node every branch is empty, so one suffices.
        const auto row = evaluate_node(cfg.params, grid, outer, grid.n, spec, res.coefficients);
        y[j] = row.Y;
        rho_y[j] = std::exp(outer.lrho[grid.n]) * row.Y;
    });
    res.rho_y = mean_with_error(rho_y);
    res.y = mean_with_error(y);
    return res;
}

FilterStudyResult filter_study(const FilterStudyConfig& cfg) {
    cfg.params.validate();
    if (cfg.levels.size() < 3) throw std::invalid_argument("filter_study: need at least three levels");
    const std::size_t n_max = *std::max_element(cfg.levels.begin(), cfg.levels.end());
    const GridSpec fine{n_max, cfg.params.horizon};

    FilterStudyResult res;
    std::vector<std::vector<double>> sups(cfg.levels.size());
    std::vector<std::vector<double>> pooled(cfg.levels.size());
    for (std::size_t j = 0; j < cfg.replications; ++j) {
        const auto draw = draw_observation(cfg.params, fine, cfg.master_seed, j);
        for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
            const std::size_t n = cfg.levels[l];
            if (n_max % n != 0) throw std::invalid_argument("filter_study: every level must divide the finest");
            const auto dW = coarsen_increments(draw.dW, n_max / n);
            const auto cmp = compare_filter_on_path(cfg.params, {n, cfg.params.horizon}, draw.bull, dW);
            sups[l].push_back(cmp.sup_error);
            pooled[l].insert(pooled[l].end(), cmp.dnu.begin(), cmp.dnu.end());
        }
    }
    std::vector<double> deltas, errors;
    for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
        FilterLevel lv;
        lv.n = cfg.levels[l];
        lv.delta = cfg.params.horizon / static_cast<double>(lv.n);
        lv.sup_error = mean_with_error(sups[l]);
        lv.nu_mean = mean_with_error(pooled[l]);
        lv.nu_variance = lv.nu_mean.variance;
        lv.nu_variance_se = lv.delta * std::sqrt(2.0 / static_cast<double>(pooled[l].size() - 1));
        deltas.push_back(lv.delta);
        errors.push_back(lv.sup_error.mean);
        res.levels.push_back(lv);
    }
    res.fit = convergence_fit(deltas, errors);
    return res;
}

ConstantDriftStudyResult constant_drift_study(const ConstantDriftStudyConfig& cfg) {
    const GridSpec grid = make_grid(cfg.params.horizon, cfg.n);
    ConstantDriftStudyResult res;
    res.coefficients = compute_c1_c2(constant_drift_moments(cfg.params), cfg.params);

    const EnsembleSpec spec{cfg.m, cfg.master_seed, cfg.stride};
    SolveOptions opts;
    opts.threads = cfg.threads;
    opts.coefficients = res.coefficients;
    const auto out = solve_path(cfg.params, grid, spec, opts);

    std::vector<std::size_t> nodes;
    for (const auto& row : out.rows) nodes.push_back(row.k);
    const auto exact = constant_drift_oracle(cfg.params, grid, out.path, res.coefficients, nodes);
    for (std::size_t j = 0; j < out.rows.size(); ++j) {
        const auto& row = out.rows[j];
        res.nodes.push_back({row.t, row.Y, exact.Y[j], row.Y_se, row.u, exact.u[j], row.u_se});
    }
    return res;
}

}  // namespace mvdrift
