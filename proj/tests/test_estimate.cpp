#include <cmath>
#include <vector>

#include "doctest.h"
#include "lpplab/estimate.hpp"
#include "lpplab/rng.hpp"

using namespace lpplab;

TEST_CASE("covariance: hand-computed values") {
    const std::vector<double> a = {1, 2, 3};
    const std::vector<double> b = {2, 4, 6};
    CHECK(covariance(a, a).estimate == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(covariance(a, b).estimate == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(covariance(a, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("covariance of a sample with itself is its variance") {
    std::vector<double> x;
    for (int i = 0; i < 200; ++i) {
        x.push_back(bits_to_exp1(Philox4x32::block64(12, static_cast<std::uint64_t>(i), 0)[0]));
    }
    double sx = 0, sxx = 0;
    for (const double v : x) {
        sx += v;
        sxx += v * v;
    }
    const double n = static_cast<double>(x.size());
    const double var = (sxx - sx * sx / n) / (n - 1.0);
    CHECK(covariance(x, x).estimate == var);
    // jackknife interval brackets the estimate
    const auto rep = covariance(x, x);
    CHECK(rep.ci_low <= rep.estimate);
    CHECK(rep.estimate <= rep.ci_high);
    CHECK(rep.stderr_value >= 0.0);
}

TEST_CASE("covariance of decoupled fields has a CI containing zero") {
    const std::int64_t n = 64, r = 32;
    const std::int64_t reps = 10000;
    std::vector<double> xr(reps), xn(reps);
    ReplicaPlan plan;
    plan.n = n;
    plan.r_values = {r};
    plan.replicas = reps;
    plan.master_seed = 100;
    const auto rec_a = run_replicas(plan);
    plan.master_seed = 200;  // independent environment for the other endpoint
    const auto rec_b = run_replicas(plan);
    for (std::int64_t k = 0; k < reps; ++k) {
        xr[static_cast<std::size_t>(k)] = rec_a[static_cast<std::size_t>(k)].x_r[0];
        xn[static_cast<std::size_t>(k)] = rec_b[static_cast<std::size_t>(k)].x_n;
    }
    const auto rep = covariance(xr, xn);
    CHECK(rep.ci_low < 0.0);
    CHECK(rep.ci_high > 0.0);
}

TEST_CASE("positive association of coupled passage times") {
    // tau = 0.5, n = 500: Cov(X_r, X_n) > 0 with the CI excluding zero
    ReplicaPlan plan;
    plan.master_seed = 42;
    plan.n = 500;
    plan.r_values = {250};
    plan.replicas = 10000;
    const auto records = run_replicas(plan);
    std::vector<double> xr(records.size()), xn(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        xr[i] = records[i].x_r[0];
        xn[i] = records[i].x_n;
    }
    const auto rep = covariance(xr, xn);
    CHECK(rep.estimate > 0.0);
    CHECK(rep.ci_low > 0.0);
}

TEST_CASE("exponent fit: exact power laws and equivariance") {
    std::vector<std::pair<double, double>> pts;
    for (const double tau : {0.05, 0.1, 0.2, 0.3}) pts.emplace_back(tau, std::pow(tau, 4.0 / 3.0));
    const auto fit = exponent_fit(pts);
    CHECK(fit.slope == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.slope_stderr == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));

    std::vector<std::pair<double, double>> flat_pts;
    for (const double tau : {0.05, 0.1, 0.2}) flat_pts.emplace_back(tau, 2.5);
    CHECK(exponent_fit(flat_pts).slope == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    // scaling every rho by a constant moves the intercept only
    std::vector<std::pair<double, double>> scaled = pts;
    for (auto& [tau, rho] : scaled) rho *= 7.25;
    const auto fit2 = exponent_fit(scaled);
    CHECK(fit2.slope == doctest::Approx(fit.slope).epsilon(1e-12));
    CHECK(fit2.intercept != doctest::Approx(fit.intercept));
}

TEST_CASE("exponent fit: nonpositive points are excluded and flagged") {
    std::vector<std::pair<double, double>> pts = {
        {0.05, 0.01}, {0.1, -0.5}, {0.15, 0.05}, {0.2, 0.09}};
    const auto fit = exponent_fit(pts);
    CHECK_FALSE(fit.points[1].used);
    CHECK(fit.points[0].used);

    std::vector<std::pair<double, double>> bad = {{0.05, -1.0}, {0.1, -1.0}, {0.2, 0.5}};
    CHECK_THROWS_AS(exponent_fit(bad), std::invalid_argument);
}

TEST_CASE("event probability: Wilson intervals") {
    std::vector<std::uint8_t> all_true(100, 1);
    const auto rep = event_probability(all_true);
    CHECK(rep.estimate == 1.0);
    CHECK(rep.ci_low > 0.9);
    CHECK(rep.ci_high <= 1.0 + 1e-12);

    std::vector<std::uint8_t> half(1000, 0);
    for (std::size_t i = 0; i < 500; ++i) half[i] = 1;
    const auto rep2 = event_probability(half);
    CHECK(rep2.estimate == doctest::Approx(0.5));
    CHECK(rep2.ci_high - rep2.ci_low == doctest::Approx(2 * 0.0309).epsilon(0.02));

    std::vector<std::uint8_t> half4(4000, 0);
    for (std::size_t i = 0; i < 2000; ++i) half4[i] = 1;
    const auto rep3 = event_probability(half4);
    CHECK(rep3.ci_high - rep3.ci_low < 0.6 * (rep2.ci_high - rep2.ci_low));
}

TEST_CASE("tail curve: monotone frequencies and validation") {
    std::vector<double> samples;
    for (int i = 0; i < 500; ++i) {
        const auto w = Philox4x32::block64(5, static_cast<std::uint64_t>(i), 0);
        const auto g = bits_to_gauss_pair(w[0], w[1]);
        samples.push_back(g[0]);
    }
    const std::vector<double> xs = {0.0, 0.5, 1.0, 1.5, 2.0};
    const auto curve = tail_curve(samples, xs);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        CHECK(curve[i].upper <= curve[i - 1].upper);
        CHECK(curve[i].lower <= curve[i - 1].lower);
    }
    CHECK(curve[0].upper >= 0.05);
    CHECK(curve[0].upper <= 0.95);
    CHECK(curve[0].lower >= 0.05);
    CHECK(curve[0].lower <= 0.95);
    CHECK_THROWS_AS(tail_curve(std::vector<double>(50, 0.0), xs), std::invalid_argument);
}

TEST_CASE("replica records are schedule-independent and seed-distinct") {
    ReplicaPlan plan;
    plan.master_seed = 7;
    plan.n = 80;
    plan.r_values = {20, 40};
    plan.replicas = 50;
    plan.geodesics = true;
    plan.umax = true;
    const auto one = run_replicas(plan, 1);
    const auto eight = run_replicas(plan, 8);
    REQUIRE(one.size() == eight.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].seed == eight[i].seed);
        CHECK(one[i].x_r == eight[i].x_r);  // bitwise
        CHECK(one[i].x_n == eight[i].x_n);
        CHECK(one[i].u0_a == eight[i].u0_a);
        CHECK(one[i].tf_r == eight[i].tf_r);
        CHECK(one[i].umax_a == eight[i].umax_a);
        CHECK(one[i].overlap_below_r == eight[i].overlap_below_r);
    }
    for (std::size_t i = 1; i < one.size(); ++i) CHECK(one[i].seed != one[0].seed);
}

TEST_CASE("strip-constrained diagonal value never exceeds the free one") {
    ReplicaPlan plan;
    plan.master_seed = 9;
    plan.n = 60;
    plan.r_values = {30};
    plan.replicas = 100;
    plan.strip_half_width = 20.0;
    const auto records = run_replicas(plan);
    for (const auto& rec : records) {
        REQUIRE(rec.has_strip);
        if (!rec.strip_excluded) CHECK(rec.x_r_strip <= rec.x_r[0] + 1e-12);
    }
}

TEST_CASE("records can carry the raw backward profile") {
    ReplicaPlan plan;
    plan.master_seed = 15;
    plan.n = 48;
    plan.r_values = {12};
    plan.replicas = 3;
    plan.keep_backward_profile = true;
    const auto records = run_replicas(plan);
    for (const auto& rec : records) {
        REQUIRE_FALSE(rec.profile.empty());
        CHECK(rec.profile.size() == static_cast<std::size_t>(2 * (48 - 12) + 1));
        CHECK(rec.profile_m_lo == -(48 - 12));
    }
}

TEST_CASE("run_replicas validates its plan") {
    ReplicaPlan plan;
    plan.replicas = 0;
    plan.n = 10;
    CHECK_THROWS_AS(run_replicas(plan), std::invalid_argument);
    plan.replicas = 1;
    plan.n = 10;
    plan.geodesics = true;  // needs an r value
    CHECK_THROWS_AS(run_replicas(plan), std::invalid_argument);
}
