#include "mvdrift/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvdrift {

namespace {

double l2_in_time(std::span<const double> values, std::span<const double> times) {
    if (values.size() == 1) return std::abs(values[0]);
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
        acc += 0.5 * (values[j] * values[j] + values[j + 1] * values[j + 1]) * (times[j + 1] - times[j]);
    }
    return std::sqrt(acc);
}

}  // namespace

ErrorReport error_report(std::span<const double> approx, std::span<const double> reference,
                         std::span<const double> times) {
    if (approx.size() != reference.size() || approx.size() != times.size()) {
        throw std::invalid_argument("error_report: trajectories and times must have equal length");
    }
    if (approx.empty()) throw std::invalid_argument("error_report: empty trajectory");
    for (std::size_t j = 1; j < times.size(); ++j) {
        if (!(times[j] > times[j - 1])) throw std::invalid_argument("error_report: times must be increasing");
    }

    ErrorReport rep;
    rep.times.assign(times.begin(), times.end());
    rep.abs_error.resize(approx.size());
    rep.rel_error.resize(approx.size());
    for (std::size_t j = 0; j < approx.size(); ++j) {
        const double e = std::abs(approx[j] - reference[j]);
        rep.abs_error[j] = e;
        const double scale = std::abs(reference[j]);
        rep.rel_error[j] = scale > 0.0 ? e / scale : (e == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        rep.sup = std::max(rep.sup, e);
    }
    rep.l2 = l2_in_time(rep.abs_error, times);
    const double ref_norm = l2_in_time(reference, times);
    rep.rel_l2 = ref_norm > 0.0 ? rep.l2 / ref_norm : (rep.l2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    return rep;
}

ErrorReport aggregate_reports(std::span<const ErrorReport> reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate_reports: no reports");
    ErrorReport out;
    out.times = reports.front().times;
    out.abs_error.assign(out.times.size(), 0.0);
    out.rel_error.assign(out.times.size(), 0.0);
    std::vector<double> l2s;
    for (const auto& rep : reports) {
        if (rep.times.size() != out.times.size()) throw std::invalid_argument("aggregate_reports: grids differ");
        for (std::size_t j = 0; j < out.times.size(); ++j) {
            out.abs_error[j] += rep.abs_error[j];
            out.rel_error[j] += rep.rel_error[j];
        }
        out.sup += rep.sup;
        out.rel_l2 += rep.rel_l2;
        l2s.push_back(rep.l2);
    }
    const double count = static_cast<double>(reports.size());
    for (std::size_t j = 0; j < out.times.size(); ++j) {
        out.abs_error[j] /= count;
        out.rel_error[j] /= count;
    }
    out.sup /= count;
    out.rel_l2 /= count;
    const auto l2 = mean_with_error(l2s);
    out.l2 = l2.mean;
    out.l2_se = l2.se;
    out.replications = reports.size();
    return out;
}

ConvergenceFit convergence_fit(std::span<const double> abscissa, std::span<const double> error) {
    if (abscissa.size() != error.size()) throw std::invalid_argument("convergence_fit: length mismatch");
    if (abscissa.size() < 3) throw std::invalid_argument("convergence_fit: need at least three points");
    ConvergenceFit fit;
    fit.abscissa.assign(abscissa.begin(), abscissa.end());
    fit.error.assign(error.begin(), error.end());

    const std::size_t n = abscissa.size();
    std::vector<double> x(n), y(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(abscissa[j] > 0.0) || !(error[j] > 0.0)) {
            throw std::invalid_argument("convergence_fit: abscissae and errors must be positive");
        }
        x[j] = std::log(abscissa[j]);
        y[j] = std::log(error[j]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        mx += x[j];
        my += y[j];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sxx += (x[j] - mx) * (x[j] - mx);
        sxy += (x[j] - mx) * (y[j] - my);
        syy += (y[j] - my) * (y[j] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("convergence_fit: abscissae must not all coincide");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

MeanEstimate mean_with_error(std::span<const double> values) {
    MeanEstimate est;
    est.count = values.size();
    if (values.empty()) return est;
    double sum = 0.0;
    for (double v : values) sum += v;
    est.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return est;
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.variance = ss / static_cast<double>(values.size() - 1);
    est.se = std::sqrt(est.variance / static_cast<double>(values.size()));
    return est;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

}  // namespace mvdrift
