#include "lpplab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpplab {

double kpz_x(std::int64_t n, std::int64_t m) {
    // cbrt keeps the map exact on perfect cubes, e.g. m = (2n)^{2/3}
    const double c = std::cbrt(2.0 * static_cast<double>(n));
    return static_cast<double>(m) / (c * c);
}

double kpz_scaled(std::int64_t n, double raw) {
    return (raw - 4.0 * static_cast<double>(n)) /
           (std::pow(2.0, 4.0 / 3.0) * std::cbrt(static_cast<double>(n)));
}

double kpz_raw(std::int64_t n, double scaled) {
    return 4.0 * static_cast<double>(n) +
           std::pow(2.0, 4.0 / 3.0) * std::cbrt(static_cast<double>(n)) * scaled;
}

bool ScaledProfile::covers(double lo, double hi) const {
    return !x.empty() && x.front() <= lo && x.back() >= hi;
}

double ScaledProfile::value_at(double xq) const {
    if (x.empty() || xq < x.front() || xq > x.back()) {
        throw std::out_of_range("ScaledProfile: query outside grid");
    }
    const auto it = std::lower_bound(x.begin(), x.end(), xq);
    const std::size_t hi = static_cast<std::size_t>(it - x.begin());
    if (x[hi] == xq) {
        if (values[hi].is_excluded()) throw std::domain_error("ScaledProfile: excluded node");
        return values[hi].value();
    }
    const std::size_t lo = hi - 1;
    if (values[lo].is_excluded() || values[hi].is_excluded()) {
        throw std::domain_error("ScaledProfile: excluded node in interpolation");
    }
    const double t = (xq - x[lo]) / (x[hi] - x[lo]);
    return (1.0 - t) * values[lo].value() + t * values[hi].value();
}

ScaledProfile rescale_point_profile(const BackwardProfile& raw, std::int64_t n) {
    ScaledProfile p;
    p.n = n;
    p.x.reserve(raw.values.size());
    p.values.reserve(raw.values.size());
    for (std::size_t j = 0; j < raw.values.size(); ++j) {
        const std::int64_t m = raw.m_lo + static_cast<std::int64_t>(j);
        p.x.push_back(kpz_x(n, m));
        p.values.push_back(ExtReal::finite(kpz_scaled(n, raw.values[j])));
    }
    return p;
}

ScaledProfile rescale_flat_profile(std::span<const double> values, std::int64_t m_lo,
                                   std::int64_t n) {
    ScaledProfile p;
    p.n = n;
    p.x.reserve(values.size());
    p.values.reserve(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        const std::int64_t m = m_lo + static_cast<std::int64_t>(j);
        p.x.push_back(kpz_x(n, m));
        p.values.push_back(ExtReal::finite(kpz_scaled(n, values[j])));
    }
    return p;
}

ScaledProfile rescale_flat_profile(const LineProfile& raw) {
    ScaledProfile p;
    p.n = raw.n;
    p.x.reserve(raw.values.size());
    p.values.reserve(raw.values.size());
    for (std::size_t j = 0; j < raw.values.size(); ++j) {
        const std::int64_t m = raw.m_lo + static_cast<std::int64_t>(j);
        p.x.push_back(kpz_x(raw.n, m));
        p.values.push_back(raw.excluded[j] ? ExtReal::excluded()
                                           : ExtReal::finite(kpz_scaled(raw.n, raw.values[j])));
    }
    return p;
}

std::pair<double, double> increment_variance(std::span<const ScaledProfile> profiles, double x,
                                             double h) {
    const std::size_t n = profiles.size();
    if (n < 2) throw std::invalid_argument("increment_variance: need at least 2 replicas");
    std::vector<double> incr(n);
    for (std::size_t i = 0; i < n; ++i) {
        incr[i] = profiles[i].value_at(x + h) - profiles[i].value_at(x);
    }
    double sum = 0.0, sum2 = 0.0;
    for (const double v : incr) {
        sum += v;
        sum2 += v * v;
    }
    const double nn = static_cast<double>(n);
    const double var = (sum2 - sum * sum / nn) / (nn - 1.0);
    if (n < 3) return {var, 0.0};

    // delete-1 jackknife of the sample variance
    std::vector<double> theta(n);
    double theta_bar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s1 = sum - incr[i];
        const double s2 = sum2 - incr[i] * incr[i];
        theta[i] = (s2 - s1 * s1 / (nn - 1.0)) / (nn - 2.0);
        theta_bar += theta[i];
    }
    theta_bar /= nn;
    double ss = 0.0;
    for (const double t : theta) ss += (t - theta_bar) * (t - theta_bar);
    const double se = std::sqrt(std::max(0.0, (nn - 1.0) / nn * ss));
    return {var, se};
}

}  // namespace lpplab
