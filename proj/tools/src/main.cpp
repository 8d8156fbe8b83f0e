// mvdrift: runs one experiment from a config file plus flag overrides.
// Precedence: built-in defaults < config file < command-line flags.
//
// Exit status: 0 success, 1 runtime error, 2 configuration error,
// 3 a validation check failed.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "run_config.hpp"

using namespace mvdrift::app;

int main(int argc, char** argv) {
    CLI::App cli{"Mean-variance portfolio selection under two-point drift uncertainty"};

    std::optional<std::string> config_path, out, experiment;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::size_t> n, m, stride, replications;
    std::optional<double> r, a, b, pi0, y0, z, horizon;

    cli.add_option("--config", config_path, "INI config file");
    cli.add_option("--seed", seed, "Master seed");
    cli.add_option("--threads", threads, "Worker threads (0 = all cores); never changes results");
    cli.add_option("--out", out, "Output directory");
    cli.add_option("--experiment", experiment, "simulate | example | compare | converge | validate");
    cli.add_option("--n", n, "Time steps");
    cli.add_option("--m", m, "Branches per evaluated node");
    cli.add_option("--stride", stride, "Evaluate every stride-th node");
    cli.add_option("--replications", replications, "Outer replications");
    cli.add_option("--r", r, "Risk-free rate");
    cli.add_option("--a", a, "Bull drift");
    cli.add_option("--b", b, "Bear drift");
    cli.add_option("--pi0", pi0, "Prior probability of the bull drift");
    cli.add_option("--y0", y0, "Initial wealth");
    cli.add_option("--z", z, "Target expected terminal wealth");
    cli.add_option("--horizon", horizon, "Horizon T in years");
    CLI11_PARSE(cli, argc, argv);

    RunConfig cfg;
    try {
        if (config_path) cfg = load_config(*config_path);
        if (seed) cfg.seed = *seed;
        if (threads) cfg.threads = *threads;
        if (out) cfg.out = *out;
        if (experiment) cfg.experiment = parse_experiment(*experiment);
        if (n) cfg.n = *n;
        if (m) cfg.m = *m;
        if (stride) cfg.stride = *stride;
        if (replications) cfg.replications = *replications;
        if (r) cfg.model.r = *r;
        if (a) cfg.model.a = *a;
        if (b) cfg.model.b = *b;
        if (pi0) cfg.model.pi0 = *pi0;
        if (y0) cfg.model.y0 = *y0;
        if (z) cfg.model.z = *z;
        if (horizon) cfg.model.horizon = *horizon;
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "mvdrift: configuration error: " << e.what() << "\n";
        return 2;
    }

    try {
        return run_experiment(cfg, std::cout) ? 0 : 3;
    } catch (const std::exception& e) {
        std::cerr << "mvdrift: error: " << e.what() << "\n";
        return 1;
    }
}
