#include "mvdrift/example_bsde.hpp"

#include <cmath>
#include <stdexcept>

#include "mvdrift/parallel.hpp"

namespace mvdrift {

ExamplePath make_example_path(const GridSpec& grid, std::span<const double> dW) {
    if (dW.size() != grid.n) throw std::invalid_argument("make_example_path: need exactly n increments");
    const double delta = grid.delta();
    ExamplePath p;
    p.dW.assign(dW.begin(), dW.end());
    p.W.assign(grid.n + 1, 0.0);
    p.H.assign(grid.n + 1, 0.0);
    p.ltheta.assign(grid.n + 1, 0.0);
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double w = p.W[k];
        const double lever = 1.0 + w;
        p.H[k + 1] = p.H[k] + lever * dW[k] - (w * w + 2.0 * w) * delta;
        p.ltheta[k + 1] = p.ltheta[k] + 2.0 * lever * dW[k] - 2.0 * lever * lever * delta;
        p.W[k + 1] = w + dW[k];
    }
    return p;
}

ExampleTrajectory example_true_solution(std::span<const double> dW, const GridSpec& grid) {
    const auto path = make_example_path(grid, dW);
    ExampleTrajectory out;
    for (std::size_t k = 0; k <= grid.n; ++k) {
        const double t = grid.time(k);
        const double x = std::exp(path.H[k] - 2.0 * t);
        out.nodes.push_back(k);
        out.times.push_back(t);
        out.X.push_back(x);
        out.Z.push_back((1.0 + path.W[k]) * x);
    }
    return out;
}

ExampleAverages example_branch_average(const GridSpec& grid, const ExamplePath& path, std::size_t k, std::size_t m,
                                       std::uint64_t seed, StreamDomain domain, unsigned threads) {
    if (k > grid.n) throw std::invalid_argument("example_branch_average: node beyond the grid");
    if (m < 1) throw std::invalid_argument("example_branch_average: need at least one branch");
    const double delta = grid.delta();
    const double sqrt_delta = std::sqrt(delta);

    std::vector<double> ratio(m), bracket(m);
    parallel_for(m, threads, [&](std::size_t i) {
        NormalStream stream(StreamKey{seed, domain, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i)});
        double w = path.W[k];
        double log_ratio = 0.0;
        double drift_integral = 0.0;  // int_t^T (1 + W) ds
        for (std::size_t l = k; l < grid.n; ++l) {
            const double dw = sqrt_delta * stream.next();
            const double lever = 1.0 + w;
            log_ratio += 2.0 * lever * dw - 2.0 * lever * lever * delta;
            drift_integral += lever * delta;
            w += dw;
        }
        ratio[i] = std::exp(log_ratio);
        bracket[i] = 2.0 * w + 2.0 - 4.0 * drift_integral;
    });

    ExampleAverages avg;
    for (std::size_t i = 0; i < m; ++i) {
        avg.ratio += ratio[i];
        avg.ratio_bracket += ratio[i] * bracket[i];
    }
    avg.ratio /= static_cast<double>(m);
    avg.ratio_bracket /= static_cast<double>(m);
    return avg;
}

ExampleTrajectory example_solve_new(const GridSpec& grid, std::span<const double> dW, std::size_t m,
                                    std::uint64_t seed, std::span<const std::size_t> nodes, unsigned threads) {
    const auto path = make_example_path(grid, dW);
    ExampleTrajectory out;
    for (std::size_t k : nodes) {
        const auto avg = example_branch_average(grid, path, k, m, seed, StreamDomain::example_branch, threads);
        // Phi_k * theta prefix, kept in log space.
        const double scale = std::exp(path.ltheta[k] - path.H[k]);
        const double x = scale * avg.ratio;
        const double phi_eta = scale * avg.ratio_bracket;
        out.nodes.push_back(k);
        out.times.push_back(grid.time(k));
        out.X.push_back(x);
        out.Z.push_back(phi_eta - (1.0 + path.W[k]) * x);
    }
    return out;
}

ExampleTrajectory example_solve_new(const GridSpec& grid, std::size_t m, std::uint64_t seed, std::size_t stride,
                                    unsigned threads) {
    const auto dW = sample_increments(example_outer_stream(seed), grid);
    const auto nodes = evaluation_nodes(grid, stride);
    return example_solve_new(grid, dW, m, seed, nodes, threads);
}

}  // namespace mvdrift
