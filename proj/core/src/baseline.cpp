#include "mvdrift/baseline.hpp"

#include <cmath>
#include <stdexcept>

namespace mvdrift {

void DoubleGrid::validate() const {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("DoubleGrid: n1 and n2 must be at least 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("DoubleGrid: horizon must be positive");
}

double old_eta(std::span<const double> N_fine, std::span<const double> W_fine, std::size_t k, const DoubleGrid& dgrid) {
    dgrid.validate();
    const std::size_t nodes = dgrid.fine_steps() + 1;
    if (N_fine.size() != nodes || W_fine.size() != nodes) {
        throw std::out_of_range("old_eta: fine arrays must cover every fine node");
    }
    if (k < 1 || k > dgrid.n1) throw std::out_of_range("old_eta: coarse index outside 1..n1");
    const std::size_t begin = (k - 1) * dgrid.n2;
    double covariation = 0.0;
    for (std::size_t j = 1; j <= dgrid.n2; ++j) {
        const std::size_t hi = begin + j;
        covariation += (N_fine[hi] - N_fine[hi - 1]) * (W_fine[hi] - W_fine[hi - 1]);
    }
    return static_cast<double>(dgrid.n1) * covariation;
}

OldExampleResult old_solve_example(const DoubleGrid& dgrid, std::span<const double> dW_fine, std::size_t m,
                                   std::uint64_t seed, unsigned threads) {
    dgrid.validate();
    if (dW_fine.size() != dgrid.fine_steps()) throw std::invalid_argument("old_solve_example: need n1 n2 increments");

    const GridSpec fine = dgrid.fine();
    const GridSpec coarse = dgrid.coarse();
    const auto fine_path = make_example_path(fine, dW_fine);
    const auto coarse_dW = coarsen_increments(dW_fine, dgrid.n2);
    const auto coarse_path = make_example_path(coarse, coarse_dW);

    OldExampleResult out;
    out.N_fine.resize(fine.n + 1);
    for (std::size_t j = 0; j <= fine.n; ++j) {
        const auto avg = example_branch_average(fine, fine_path, j, m, seed, StreamDomain::baseline_branch, threads);
        out.N_fine[j] = std::exp(fine_path.ltheta[j]) * avg.ratio;
    }

    for (std::size_t k = 0; k <= coarse.n; ++k) {
        const auto avg = example_branch_average(coarse, coarse_path, k, m, seed, StreamDomain::baseline_coarse, threads);
        out.times.push_back(coarse.time(k));
        out.X.push_back(std::exp(coarse_path.ltheta[k] - coarse_path.H[k]) * avg.ratio);
    }

    for (std::size_t k = 1; k <= coarse.n; ++k) {
        const double eta1 = old_eta(out.N_fine, fine_path.W, k, dgrid);
        const double phi = std::exp(-coarse_path.H[k]);
        out.z_times.push_back(coarse.time(k));
        out.eta1.push_back(eta1);
        out.Z.push_back(phi * eta1 - (1.0 + coarse_path.W[k]) * out.X[k]);
    }
    return out;
}

OldExampleResult old_solve_example(const DoubleGrid& dgrid, std::size_t m, std::uint64_t seed, unsigned threads) {
    const auto dW = sample_increments(example_outer_stream(seed), dgrid.fine());
    return old_solve_example(dgrid, dW, m, seed, threads);
}

}  // namespace mvdrift
