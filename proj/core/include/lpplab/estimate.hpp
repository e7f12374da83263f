#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpplab/events.hpp"
#include "lpplab/field.hpp"

namespace lpplab {

struct EstimateReport {
    double estimate = 0.0;
    double stderr_value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::int64_t n_samples = 0;
    std::string config_echo;
};

// Unbiased sample covariance (1/(n-1)) with delete-1 jackknife standard error
// and a 95% normal interval.
EstimateReport covariance(std::span<const double> x, std::span<const double> y);

// Frequency with a Wilson 95% interval.
EstimateReport event_probability(std::span<const std::uint8_t> flags);

struct ExponentPoint {
    double tau = 0.0;
    double rho = 0.0;
    bool used = false;
};

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    std::vector<ExponentPoint> points;
};

// Least-squares slope of log(rho) against log(tau). Nonpositive rho points
// are flagged and excluded; fewer than three usable points is an error.
ExponentFit exponent_fit(std::span<const std::pair<double, double>> points);

struct TailPoint {
    double x = 0.0;
    double upper = 0.0;  // freq(sample >= x)
    double lower = 0.0;  // freq(sample <= -x)
};

// Two-sided empirical tail frequencies; needs at least 100 samples.
std::vector<TailPoint> tail_curve(std::span<const double> samples,
                                  std::span<const double> thresholds);

// Deterministic worker pool: body(k) is a pure function of k, so the result
// layout is independent of the thread count and schedule.
void parallel_replicas(std::int64_t count, int threads,
                       const std::function<void(std::int64_t)>& body);

enum class IndicatorKind { EDec, TwoPeaks, LargeTF, Barrier, Classify };

struct IndicatorRequest {
    IndicatorKind kind = IndicatorKind::EDec;
    EventParams params;
    double threshold_c1 = 1.0;  // LargeTF
    double i_lo = 0.0;          // TwoPeaks interval
    double i_hi = 0.0;
    std::string name;

    int column_count() const { return kind == IndicatorKind::Classify ? 2 : 1; }
};

struct ReplicaPlan {
    std::uint64_t master_seed = 0;
    std::int64_t n = 0;
    std::vector<std::int64_t> r_values;  // coupled diagonal reads; front() drives geodesics
    InitialConditionKind ic = InitialConditionKind::Flat;
    std::int64_t replicas = 1;
    bool geodesics = false;          // u0, TF(Gamma_r), overlap below L_r
    bool umax = false;               // argmax of the backward profile on L_r
    bool keep_backward_profile = false;  // attach the raw profile to each record
    double strip_half_width = -1.0;  // >= 0 requests X_r constrained to Strip(w)
    std::vector<IndicatorRequest> indicators;
};

struct ReplicaRecord {
    std::int64_t replica = 0;
    std::uint64_t seed = 0;
    std::vector<double> x_r;
    double x_n = 0.0;
    bool has_geodesics = false;
    std::int64_t u0_a = 0;
    std::int64_t tf_r = 0;
    std::int64_t overlap_below_r = 0;
    bool has_umax = false;
    std::int64_t umax_a = 0;
    bool has_strip = false;
    bool strip_excluded = false;
    double x_r_strip = 0.0;
    std::vector<int> indicator_values;  // column layout from the plan's requests
    // raw backward profile over L_r toward (n, n), when requested
    std::int64_t profile_m_lo = 0;
    std::vector<double> profile;
};

// Replica k is a pure function of (master_seed, k, plan); records come back in
// replica-index order whatever the worker count.
std::vector<ReplicaRecord> run_replicas(const ReplicaPlan& plan, int threads = 1);

}  // namespace lpplab
