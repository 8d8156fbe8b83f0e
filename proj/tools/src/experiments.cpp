#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "csv.hpp"
#include "mvdrift/particle_scheme.hpp"
#include "mvdrift/studies.hpp"

namespace mvdrift::app {

namespace {

namespace fs = std::filesystem;

using u64 = std::uint64_t;

ExampleStudyConfig example_config(const RunConfig& cfg) {
    ExampleStudyConfig ec;
    ec.n = cfg.n;
    ec.m = cfg.m;
    ec.stride = cfg.stride;
    ec.seeds = cfg.replications;
    ec.n2 = cfg.coarse_split;
    ec.master_seed = cfg.seed;
    ec.threads = cfg.threads;
    return ec;
}

bool simulate(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
    const GridSpec grid = make_grid(cfg.model.horizon, cfg.n);
    SolveOptions opts;
    opts.moment_paths = cfg.moment_paths;
    opts.threads = cfg.threads;
    const auto out = solve_path(cfg.model, grid, {cfg.m, cfg.seed, cfg.stride}, opts);

    CsvWriter traj(dir / "trajectories.csv", {"t", "pi", "Y", "u", "eta", "N1", "N2", "N3"});
    CsvWriter err(dir / "errors.csv", {"t", "Y_se", "u_se"});
    for (const auto& r : out.rows) {
        traj.row({r.t, r.pi, r.Y, r.u, r.eta, r.N1, r.N2, r.N3});
        err.row({r.t, r.Y_se, r.u_se});
    }
    const auto& c = out.coefficients;
    log << "c1 = " << format_double(c.c1) << ", c2 = " << format_double(c.c2)
        << ", E rho_T = " << format_double(c.moments.e_rho) << "\n"
        << "Y(0) = " << format_double(out.rows.front().Y) << ", u(0) = " << format_double(out.rows.front().u) << "\n";
    return true;
}

void write_example(const ExampleStudyResult& res, const fs::path& dir) {
    CsvWriter traj(dir / "example.csv", {"replication", "seed", "t", "X", "Z", "X_true", "Z_true"});
    for (std::size_t j = 0; j < res.seeds.size(); ++j) {
        const auto& s = res.seeds[j];
        for (std::size_t i = 0; i < s.estimate.times.size(); ++i) {
            traj.row({u64{j}, s.seed, s.estimate.times[i], s.estimate.X[i], s.estimate.Z[i], s.X_true[i], s.Z_true[i]});
        }
    }
}

bool example(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
    const auto res = example_study(example_config(cfg), false);
    write_example(res, dir);
    CsvWriter err(dir / "errors.csv", {"replication", "seed", "x_rel_l2", "z_rel_l2"});
    for (std::size_t j = 0; j < res.seeds.size(); ++j) {
        err.row({u64{j}, res.seeds[j].seed, res.seeds[j].x_rel_l2, res.seeds[j].z_rel_l2});
    }
    log << "median relative L2 error: X " << format_double(res.median_x_rel_l2) << ", Z "
        << format_double(res.median_z_rel_l2) << "\n";
    return true;
}

bool compare(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
    const auto res = example_study(example_config(cfg), true);
    write_example(res, dir);
    CsvWriter err(dir / "errors.csv", {"replication", "seed", "x_rel_l2", "z_rel_l2", "z_new_l2", "z_old_l2"});
    for (std::size_t j = 0; j < res.seeds.size(); ++j) {
        const auto& s = res.seeds[j];
        err.row({u64{j}, s.seed, s.x_rel_l2, s.z_rel_l2, s.z_new_l2, s.z_old_l2});
    }
    log << "new scheme has the smaller Z error on " << res.new_wins << " of " << res.seeds.size()
        << " replications\n";
    return true;
}

bool converge(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
    RateStudyConfig rc;
    rc.replications = cfg.replications;
    rc.master_seed = cfg.seed;
    rc.threads = cfg.threads;
    const auto res = rate_study(rc);
    // Data rows leave slope and r2 empty; each series ends with a fit row.
    CsvWriter conv(dir / "convergence.csv", {"series", "abscissa", "error", "slope", "r2"});
    for (const auto& s : res.series) {
        for (std::size_t i = 0; i < s.fit.abscissa.size(); ++i) {
            conv.row({std::string_view(s.name), s.fit.abscissa[i], s.fit.error[i], std::string_view(),
                      std::string_view()});
        }
        conv.row({std::string_view(s.name), std::string_view(), std::string_view(), s.fit.slope, s.fit.r2});
        log << s.name << ": slope " << format_double(s.fit.slope) << ", r2 " << format_double(s.fit.r2) << "\n";
    }
    return true;
}

bool validate(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
    CsvWriter val(dir / "validation.csv", {"check", "value", "target", "tolerance", "pass"});
    bool all = true;
    std::size_t failures = 0;
    auto check = [&](const std::string& name, double value, double target, double tol) {
        const bool ok = std::abs(value - target) <= tol;
        val.row({std::string_view(name), value, target, tol, std::string_view(ok ? "1" : "0")});
        all = all && ok;
        failures += !ok;
    };

    BudgetStudyConfig bc;
    bc.params = cfg.model;
    bc.n = cfg.n;
    bc.replications = cfg.replications;
    bc.moment_paths = cfg.moment_paths;
    bc.master_seed = cfg.seed;
    bc.threads = cfg.threads;
    const auto budget = budget_study(bc);
    check("budget_rho_Y", budget.rho_y.mean, cfg.model.y0, 3.0 * budget.rho_y.se);
    check("budget_Y", budget.y.mean, cfg.model.z, 3.0 * budget.y.se);

    FilterStudyConfig fc;
    fc.params = cfg.model;
    fc.replications = cfg.replications;
    fc.master_seed = cfg.seed;
    const auto filter = filter_study(fc);
    check("filter_slope", filter.fit.slope, 0.5, 0.15);
    check("filter_r2", filter.fit.r2, 1.0, 0.1);
    for (const auto& lv : filter.levels) {
        const std::string n = std::to_string(lv.n);
        check("filter_nu_mean_n" + n, lv.nu_mean.mean, 0.0, 3.0 * lv.nu_mean.se);
        check("filter_nu_variance_n" + n, lv.nu_variance, lv.delta, 3.0 * lv.nu_variance_se);
    }

    // Known drift: the config market with the prior pinned at the bull state.
    ConstantDriftStudyConfig cc;
    cc.params = cfg.model;
    cc.params.pi0 = 1.0;
    cc.n = cfg.n;
    cc.m = cfg.m;
    cc.stride = cfg.stride;
    cc.master_seed = cfg.seed;
    cc.threads = cfg.threads;
    const auto cd = constant_drift_study(cc);
    const double slack = 1e-9 * (std::abs(cd.coefficients.c1) + std::abs(cd.coefficients.c2));
    for (const auto& nd : cd.nodes) {
        const std::string t = format_double(nd.t);
        check("constant_drift_Y_t" + t, nd.Y, nd.Y_true, 3.0 * nd.Y_se + slack);
        check("constant_drift_u_t" + t, nd.u, nd.u_true, 3.0 * nd.u_se + slack);
    }
    log << (all ? "all validation checks passed\n" : std::to_string(failures) + " validation checks failed\n");
    return all;
}

}  // namespace

bool run_experiment(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const fs::path dir(cfg.out);
    fs::create_directories(dir);
    {
        std::ofstream meta(dir / "run_meta.ini", std::ios::binary);
        if (!meta) throw std::runtime_error("cannot write '" + (dir / "run_meta.ini").string() + "'");
        meta << to_ini(cfg);
    }
    switch (cfg.experiment) {
        case Experiment::simulate: return simulate(cfg, dir, log);
        case Experiment::example: return example(cfg, dir, log);
        case Experiment::compare: return compare(cfg, dir, log);
        case Experiment::converge: return converge(cfg, dir, log);
        case Experiment::validate: return validate(cfg, dir, log);
    }
    return false;
}

}  // namespace mvdrift::app
