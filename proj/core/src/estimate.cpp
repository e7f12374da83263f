#include "lpplab/estimate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "lpplab/geodesic.hpp"
#include "lpplab/region.hpp"
#include "lpplab/rng.hpp"
#include "lpplab/scaling.hpp"

namespace lpplab {

namespace {
constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kStationarySubStream = 0xC3A5C85C97CB3127ull;
}  // namespace

EstimateReport covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("covariance: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("covariance: need at least two samples");
    const double nn = static_cast<double>(n);

    double sx = 0.0, sy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
    }
    const double cov = (sxy - sx * sy / nn) / (nn - 1.0);

    double se = 0.0;
    if (n >= 3) {
        // delete-1 jackknife
        std::vector<double> theta(n);
        double theta_bar = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sx_i = sx - x[i];
            const double sy_i = sy - y[i];
            const double sxy_i = sxy - x[i] * y[i];
            theta[i] = (sxy_i - sx_i * sy_i / (nn - 1.0)) / (nn - 2.0);
            theta_bar += theta[i];
        }
        theta_bar /= nn;
        double ss = 0.0;
        for (const double t : theta) ss += (t - theta_bar) * (t - theta_bar);
        se = std::sqrt(std::max(0.0, (nn - 1.0) / nn * ss));
    }

    EstimateReport rep;
    rep.estimate = cov;
    rep.stderr_value = se;
    rep.ci_low = cov - kZ95 * se;
    rep.ci_high = cov + kZ95 * se;
    rep.n_samples = static_cast<std::int64_t>(n);
    return rep;
}

EstimateReport event_probability(std::span<const std::uint8_t> flags) {
    if (flags.empty()) throw std::invalid_argument("event_probability: no samples");
    const double n = static_cast<double>(flags.size());
    double hits = 0.0;
    for (const auto f : flags) hits += (f != 0) ? 1.0 : 0.0;
    const double p = hits / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;

    EstimateReport rep;
    rep.estimate = p;
    rep.stderr_value = std::sqrt(p * (1.0 - p) / n);
    rep.ci_low = center - half;
    rep.ci_high = center + half;
    rep.n_samples = static_cast<std::int64_t>(flags.size());
    return rep;
}

ExponentFit exponent_fit(std::span<const std::pair<double, double>> points) {
    ExponentFit fit;
    std::vector<std::pair<double, double>> logs;
    for (const auto& [tau, rho] : points) {
        ExponentPoint p;
        p.tau = tau;
        p.rho = rho;
        p.used = rho > 0.0 && tau > 0.0;
        fit.points.push_back(p);
        if (p.used) logs.emplace_back(std::log(tau), std::log(rho));
    }
    const std::size_t n = logs.size();
    if (n < 3) throw std::invalid_argument("exponent_fit: fewer than 3 usable points");
    const double nn = static_cast<double>(n);

    double sx = 0.0, sy = 0.0;
    for (const auto& [lx, ly] : logs) {
        sx += lx;
        sy += ly;
    }
    const double mx = sx / nn, my = sy / nn;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [lx, ly] : logs) {
        sxx += (lx - mx) * (lx - mx);
        sxy += (lx - mx) * (ly - my);
        syy += (ly - my) * (ly - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("exponent_fit: degenerate tau grid");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double ssr = 0.0;
    for (const auto& [lx, ly] : logs) {
        const double resid = ly - (fit.intercept + fit.slope * lx);
        ssr += resid * resid;
    }
    fit.slope_stderr = (n > 2) ? std::sqrt(ssr / (nn - 2.0) / sxx) : 0.0;
    fit.r_squared = (syy > 0.0) ? 1.0 - ssr / syy : 1.0;
    return fit;
}

std::vector<TailPoint> tail_curve(std::span<const double> samples,
                                  std::span<const double> thresholds) {
    if (samples.size() < 100) throw std::invalid_argument("tail_curve: need at least 100 samples");
    const double n = static_cast<double>(samples.size());
    std::vector<TailPoint> out;
    out.reserve(thresholds.size());
    for (const double x : thresholds) {
        TailPoint tp;
        tp.x = x;
        double up = 0.0, down = 0.0;
        for (const double s : samples) {
            if (s >= x) up += 1.0;
            if (s <= -x) down += 1.0;
        }
        tp.upper = up / n;
        tp.lower = down / n;
        out.push_back(tp);
    }
    return out;
}

void parallel_replicas(std::int64_t count, int threads,
                       const std::function<void(std::int64_t)>& body) {
    if (count <= 0) return;
    threads = std::max(1, threads);
    if (threads == 1) {
        for (std::int64_t k = 0; k < count; ++k) body(k);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::exception_ptr error;
    std::mutex error_mu;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::int64_t k = next.fetch_add(1);
                if (k >= count) return;
                try {
                    body(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

InitialCondition make_ic(InitialConditionKind kind, std::uint64_t replica_seed) {
    switch (kind) {
        case InitialConditionKind::Flat:
            return InitialCondition::flat();
        case InitialConditionKind::Droplet:
            return InitialCondition::droplet();
        case InitialConditionKind::Stationary:
            return InitialCondition::stationary(mix_seed(replica_seed, kStationarySubStream));
        case InitialConditionKind::Table:
            throw std::invalid_argument("run_replicas: table initial data is not replica-addressable");
    }
    throw std::logic_error("make_ic: bad kind");
}

}  // namespace

std::vector<ReplicaRecord> run_replicas(const ReplicaPlan& plan, int threads) {
    if (plan.replicas < 1) throw std::invalid_argument("run_replicas: need at least one replica");
    if (plan.n < 1) throw std::invalid_argument("run_replicas: need n >= 1");
    for (const auto r : plan.r_values) {
        if (r < 0 || r > plan.n) throw std::invalid_argument("run_replicas: r outside [0, n]");
    }
    const bool needs_backward =
        plan.umax || plan.keep_backward_profile ||
        std::any_of(plan.indicators.begin(), plan.indicators.end(), [](const auto& q) {
            return q.kind == IndicatorKind::EDec || q.kind == IndicatorKind::Classify;
        });
    if ((plan.geodesics || needs_backward || plan.strip_half_width >= 0) && plan.r_values.empty()) {
        throw std::invalid_argument("run_replicas: geodesic/profile statistics need an r value");
    }

    std::vector<ReplicaRecord> records(static_cast<std::size_t>(plan.replicas));
    parallel_replicas(plan.replicas, threads, [&](std::int64_t k) {
        ReplicaRecord rec;
        rec.replica = k;
        rec.seed = mix_seed(plan.master_seed, static_cast<std::uint64_t>(k));
        const FieldSpec field{rec.seed, FieldBounds{}};
        const InitialCondition ic = make_ic(plan.ic, rec.seed);

        SolveOptions opts;
        opts.keep_all_rows = false;
        opts.keep_backpointers = plan.geodesics;
        const PassageSolution sol =
            (plan.ic == InitialConditionKind::Droplet)
                ? solve_from_point(field, {0, 0}, 2 * plan.n, RegionPredicate::all(), opts)
                : solve_forward(field, ic, 2 * plan.n, RegionPredicate::all(), opts);

        rec.x_r.reserve(plan.r_values.size());
        for (const auto r : plan.r_values) rec.x_r.push_back(sol.diagonal_value(r).value());
        rec.x_n = sol.diagonal_value(plan.n).value();

        const std::int64_t r0 = plan.r_values.empty() ? 0 : plan.r_values.front();
        if (plan.geodesics) {
            const GeodesicPath to_n = trace_geodesic(sol, {plan.n, plan.n});
            const GeodesicPath to_r = trace_geodesic(sol, {r0, r0});
            rec.u0_a = crossing_point(to_n, r0).transverse();
            rec.tf_r = transversal_fluctuation(to_r);
            rec.overlap_below_r = overlap(to_r, to_n, std::pair{sol.base_sum(), 2 * r0 - 1});
            rec.has_geodesics = true;
        }

        BackwardProfile backward;
        bool have_backward = false;
        auto ensure_backward = [&]() {
            if (!have_backward) {
                backward = solve_backward(field, {plan.n, plan.n}, r0, plan.n - r0);
                have_backward = true;
            }
        };

        if (plan.umax) {
            ensure_backward();
            rec.umax_a = argmax_on_line(backward).transverse();
            rec.has_umax = true;
        }

        if (plan.keep_backward_profile) {
            ensure_backward();
            rec.profile_m_lo = backward.m_lo;
            rec.profile = backward.values;
        }

        if (plan.strip_half_width >= 0.0) {
            const auto strip =
                RegionPredicate::strip(static_cast<std::int64_t>(plan.strip_half_width));
            SolveOptions sopts;
            sopts.keep_all_rows = false;
            const PassageSolution ssol =
                (plan.ic == InitialConditionKind::Droplet)
                    ? solve_from_point(field, {0, 0}, 2 * r0, strip, sopts)
                    : solve_forward(field, ic, 2 * r0, strip, sopts);
            const ExtReal v = ssol.diagonal_value(r0);
            rec.has_strip = true;
            rec.strip_excluded = v.is_excluded();
            rec.x_r_strip = v.value_or(0.0);
        }

        for (const auto& req : plan.indicators) {
            switch (req.kind) {
                case IndicatorKind::EDec: {
                    ensure_backward();
                    rec.indicator_values.push_back(
                        indicator_e_dec(backward, r0, plan.n, req.params) ? 1 : 0);
                    break;
                }
                case IndicatorKind::Classify: {
                    ensure_backward();
                    const PeakClassification c = classify_a_b_c(backward, r0, plan.n, req.params);
                    rec.indicator_values.push_back(static_cast<int>(c.j));
                    rec.indicator_values.push_back(static_cast<int>(c.label));
                    break;
                }
                case IndicatorKind::TwoPeaks: {
                    const double win = 2.0 * req.params.M *
                                       std::pow(2.0 * static_cast<double>(plan.n), 2.0 / 3.0);
                    const BackwardProfile base_prof = solve_backward(
                        field, {plan.n, plan.n}, 0,
                        std::min<std::int64_t>(plan.n, static_cast<std::int64_t>(win) + 2));
                    const ScaledProfile scaled = rescale_point_profile(base_prof, plan.n);
                    rec.indicator_values.push_back(
                        indicator_two_peaks(scaled, req.i_lo, req.i_hi, req.params) ? 1 : 0);
                    break;
                }
                case IndicatorKind::LargeTF: {
                    rec.indicator_values.push_back(
                        indicator_large_tf(field, r0, req.params, req.threshold_c1) ? 1 : 0);
                    break;
                }
                case IndicatorKind::Barrier: {
                    BarrierSpec region;
                    region.r = r0;
                    region.inner_mult = req.params.theta;
                    region.outer_mult = req.params.phi;
                    rec.indicator_values.push_back(
                        indicator_barrier(field, region, req.params) ? 1 : 0);
                    break;
                }
            }
        }

        records[static_cast<std::size_t>(k)] = std::move(rec);
    });
    return records;
}

}  // namespace lpplab
