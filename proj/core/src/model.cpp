#include "mvdrift/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mvdrift {

void ModelParams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("ModelParams: " + msg); };
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(r) || !std::isfinite(pi0) ||
        !std::isfinite(y0) || !std::isfinite(z) || !std::isfinite(horizon)) {
        fail("all fields must be finite");
    }
    if (!(gamma() > 0.0)) {
        std::ostringstream os;
        os << "drift gap a - b must be positive (a=" << a << ", b=" << b << ")";
        fail(os.str());
    }
    if (pi0 < 0.0 || pi0 > 1.0) fail("pi0 must lie in [0, 1]");
    if (!(y0 > 0.0)) fail("y0 must be positive");
    if (!(horizon > 0.0)) fail("horizon must be positive");
}

ModelParams default_market() {
    ModelParams p;
    p.a = 0.04;
    p.b = 0.032;
    p.r = 0.03;
    p.pi0 = 0.1;
    p.y0 = 100.0;
    p.z = p.y0 * (1.0 + p.r + 0.03);
    p.horizon = 1.0;
    return p;
}

double truncated_diffusion(double x, double gamma) noexcept {
    if (x < 0.0 || x > 1.0) return 0.0;
    return gamma * x * (1.0 - x);
}

double log_rho_increment(double pi, double dnu, double delta, const ModelParams& params) noexcept {
    const double theta = params.excess_drift(pi);
    return -theta * dnu - (params.r + 0.5 * theta * theta) * delta;
}

double exact_posterior(double pi0, double log_price, double t, const ModelParams& params) {
    if (pi0 < 0.0 || pi0 > 1.0) throw std::invalid_argument("exact_posterior: pi0 outside [0, 1]");
    if (t < 0.0) throw std::invalid_argument("exact_posterior: negative time");
    if (pi0 == 0.0 || pi0 == 1.0) return pi0;

    const double gamma = params.gamma();
    const double log_lambda = gamma * log_price - 0.5 * gamma * (params.a + params.b - 1.0) * t;
    const double log_odds = std::log(pi0) - std::log1p(-pi0) + log_lambda;
    // Logistic function, evaluated on the side that cannot overflow.
    double p;
    if (log_odds >= 0.0) {
        p = 1.0 / (1.0 + std::exp(-log_odds));
    } else {
        const double e = std::exp(log_odds);
        p = e / (1.0 + e);
    }
    return std::clamp(p, 0.0, 1.0);
}

TerminalCoefficients compute_c1_c2(const MomentEstimates& moments, const ModelParams& params) {
    const double var = moments.e_rho2 - moments.e_rho * moments.e_rho;
    if (!(var > kDegenerateVariance)) {
        std::ostringstream os;
        os << "Var(rho_T) = " << var << " is degenerate; rho_T is numerically constant";
        throw DegenerateVarianceError(os.str());
    }
    TerminalCoefficients out;
    out.moments = moments;
    out.moments.var_rho = var;
    out.c1 = (params.z * moments.e_rho2 - params.y0 * moments.e_rho) / var;
    out.c2 = (params.y0 - params.z * moments.e_rho) / var;
    return out;
}

}  // namespace mvdrift
