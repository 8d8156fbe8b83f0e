#include "mvdrift/malliavin.hpp"

#include <cmath>
#include <stdexcept>

namespace mvdrift {

MalliavinBranch malliavin_branch(const BranchEnsemble& ensemble, std::size_t i, double gamma) {
    MalliavinBranch out;
    out.root = ensemble.root();
    const auto pi = ensemble.pi(i);
    const auto dnu = ensemble.dnu(i);
    out.seed = truncated_diffusion(pi[0], gamma);
    out.values.resize(ensemble.length() + 1);
    out.values[0] = out.seed;
    for (std::size_t l = 0; l < ensemble.length(); ++l) {
        out.values[l + 1] = malliavin_pi_step(out.values[l], pi[l], dnu[l], gamma);
    }
    return out;
}

double continuous_malliavin_pi(std::span<const double> pi, std::span<const double> dnu, double gamma, double delta) {
    if (pi.size() != dnu.size() + 1) throw std::invalid_argument("continuous_malliavin_pi: need one more node than step");
    const double prefactor = truncated_diffusion(pi[0], gamma);
    if (prefactor == 0.0) return 0.0;
    double exponent = 0.0;
    for (std::size_t j = 0; j < dnu.size(); ++j) {
        const double slope = gamma * (1.0 - 2.0 * pi[j]);
        exponent += slope * dnu[j] - 0.5 * slope * slope * delta;
    }
    return prefactor * std::exp(exponent);
}

BranchIntegrals branch_s2_s3(const BranchEnsemble& ensemble, std::size_t i, const MalliavinBranch& mall,
                             const ModelParams& params, const GridSpec& grid) {
    if (mall.root != ensemble.root()) throw std::invalid_argument("branch_s2_s3: ensemble and derivative roots differ");
    if (mall.values.size() != ensemble.length() + 1) throw std::invalid_argument("branch_s2_s3: derivative length mismatch");
    const auto pi = ensemble.pi(i);
    const auto dnu = ensemble.dnu(i);
    const double delta = grid.delta();
    BranchIntegrals out;
    for (std::size_t l = 0; l < ensemble.length(); ++l) {
        const double d = mall.values[l];
        out.s2 += d * dnu[l];
        out.s3 += delta * params.excess_drift(pi[l]) * d;
    }
    return out;
}

}  // namespace mvdrift
