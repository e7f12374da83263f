#include "lpplab/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lpplab/rng.hpp"

namespace lpplab {

namespace {

// One standard normal per (side, index), two per Philox block.
double gauss_increment(std::uint64_t seed, std::uint64_t side, std::int64_t i) {
    const auto words =
        Philox4x32::block64(seed, static_cast<std::uint64_t>(i >> 1), side);
    const auto pair = bits_to_gauss_pair(words[0], words[1]);
    return pair[static_cast<std::size_t>(i & 1)];
}

}  // namespace

double BrownianPath::max_on(double lo, double hi) const {
    const std::int64_t n = static_cast<std::int64_t>(values.size());
    std::int64_t i_lo = center + static_cast<std::int64_t>(std::ceil(lo / step - 1e-9));
    std::int64_t i_hi = center + static_cast<std::int64_t>(std::floor(hi / step + 1e-9));
    i_lo = std::max<std::int64_t>(i_lo, 0);
    i_hi = std::min<std::int64_t>(i_hi, n - 1);
    if (i_lo > i_hi) throw std::invalid_argument("BrownianPath::max_on: empty window");
    double best = values[static_cast<std::size_t>(i_lo)];
    for (std::int64_t i = i_lo + 1; i <= i_hi; ++i) {
        best = std::max(best, values[static_cast<std::size_t>(i)]);
    }
    return best;
}

BrownianPath sample_bm(double half_width, double step, std::uint64_t seed) {
    if (!(step > 0.0) || step > half_width) {
        throw std::invalid_argument("sample_bm: need 0 < step <= half_width");
    }
    BrownianPath path;
    path.half_width = half_width;
    path.step = step;
    const std::int64_t k = static_cast<std::int64_t>(std::llround(half_width / step));
    path.center = k;
    path.values.assign(static_cast<std::size_t>(2 * k + 1), 0.0);
    const double sd = std::sqrt(path.diffusivity * step);
    double w = 0.0;
    for (std::int64_t i = 1; i <= k; ++i) {
        w += sd * gauss_increment(seed, 0, i);
        path.values[static_cast<std::size_t>(k + i)] = w;
    }
    w = 0.0;
    for (std::int64_t i = 1; i <= k; ++i) {
        w += sd * gauss_increment(seed, 1, i);
        path.values[static_cast<std::size_t>(k - i)] = w;
    }
    return path;
}

EstimateReport two_peak_mc(double M, double i_lo, double i_hi, double eps, std::int64_t replicas,
                           double step, std::uint64_t seed, int threads) {
    if (i_lo > i_hi) throw std::invalid_argument("two_peak_mc: empty interval");
    // the bound regime is I inside [-M, M]; the sampler itself accepts any
    // window inside the sampled range [-2M, 2M]
    if (i_lo < -2.0 * M || i_hi > 2.0 * M) {
        throw std::invalid_argument("two_peak_mc: interval outside [-2M, 2M]");
    }
    if (replicas < 1) throw std::invalid_argument("two_peak_mc: need replicas >= 1");
    const double gap = std::sqrt(eps);
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(replicas));
    parallel_replicas(replicas, threads, [&](std::int64_t r) {
        const BrownianPath path = sample_bm(2.0 * M, step, mix_seed(seed, static_cast<std::uint64_t>(r)));
        const double max_i = path.max_on(i_lo, i_hi);
        const double max_all = path.max_on(-2.0 * M, 2.0 * M);
        flags[static_cast<std::size_t>(r)] = (max_i > max_all - gap) ? 1 : 0;
    });
    return event_probability(flags);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

// Composite over unit panels so no feature is skipped by the first split.
double integrate(const std::function<double(double)>& f, double a, double b) {
    double total = 0.0;
    for (double lo = a; lo < b; lo += 1.0) {
        const double hi = std::min(lo + 1.0, b);
        const double m = 0.5 * (lo + hi);
        total += simpson(f, lo, hi, f(lo), f(m), f(hi), 1e-13, 30);
    }
    return total;
}

// The three m-independent integrals of the reflection-principle computation,
// reduced to one dimension along u = h1 + h2.
double two_peak_c2_numerator() {
    static const double value = [] {
        const double i1 =
            integrate([](double u) { return u * u * u * u * std::exp(-u * u / 4.0) / 6.0; }, 0.0, 16.0);
        const double i2 =
            integrate([](double u) { return u * u * u * std::exp(-u * u / 4.0); }, 0.0, 16.0);
        const double i3 =
            integrate([](double u) { return u * u * std::exp(-u * u / 4.0); }, 0.0, 16.0);
        return 2.0 * std::max({i1, i2, i3});
    }();
    return value;
}

}  // namespace

double two_peak_bound(double M, double m, double eps) {
    if (!(M > 0.0) || !(m > 0.0) || !(eps > 0.0)) {
        throw std::invalid_argument("two_peak_bound: M, m, eps must be positive");
    }
    const double c2 = two_peak_c2_numerator() / (std::sqrt(4.0 * M_PI) * 4.0 * M_PI * M);
    return c2 * (m + std::sqrt(eps) * std::sqrt(m) + eps);
}

EstimateReport c_prime_event_mc(double M, double lambda, double lambda_prime, double alpha,
                                double tau, std::int64_t replicas, double step,
                                std::uint64_t seed, int threads) {
    if (!(0.0 < lambda && lambda < lambda_prime && lambda_prime < 1.0)) {
        throw std::invalid_argument("c_prime_event_mc: need 0 < lambda < lambda' < 1");
    }
    if (!(alpha > 0.0) || !(tau > 0.0) || tau >= 0.5) {
        throw std::invalid_argument("c_prime_event_mc: need alpha > 0 and tau in (0, 1/2)");
    }
    if (replicas < 1) throw std::invalid_argument("c_prime_event_mc: need replicas >= 1");

    int k_star = 0;
    while (std::ldexp(lambda_prime, k_star + 1) <= 8.0) ++k_star;
    const double domain = std::max(M, std::ldexp(lambda_prime, k_star));
    const double sqrt_lp = std::sqrt(lambda_prime);

    std::vector<std::uint8_t> flags(static_cast<std::size_t>(replicas));
    parallel_replicas(replicas, threads, [&](std::int64_t r) {
        const BrownianPath path = sample_bm(domain, step, mix_seed(seed, static_cast<std::uint64_t>(r)));
        const double central = path.max_on(-lambda, lambda);
        const double wide = path.max_on(-M, M);
        bool event = false;
        if (central == wide) {
            if (central >= path.value_at_zero() + sqrt_lp / alpha) {
                event = true;
            } else {
                for (int k = 1; k <= k_star && !event; ++k) {
                    const double lo = std::ldexp(lambda_prime, k - 1);
                    const double hi = std::ldexp(lambda_prime, k);
                    const double annulus =
                        std::max(path.max_on(lo, hi), path.max_on(-hi, -lo));
                    const double margin =
                        std::pow(2.0, static_cast<double>(k) * (0.5 - tau)) * alpha * sqrt_lp;
                    if (central <= annulus + margin) event = true;
                }
            }
        }
        flags[static_cast<std::size_t>(r)] = event ? 1 : 0;
    });
    return event_probability(flags);
}

}  // namespace lpplab
