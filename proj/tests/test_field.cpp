#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "lpplab/field.hpp"
#include "lpplab/rng.hpp"

using namespace lpplab;

TEST_CASE("weight_at is bitwise deterministic") {
    const FieldSpec spec{42, FieldBounds{}};
    const double a = weight_at(spec, {0, 0});
    const double b = weight_at(spec, {0, 0});
    CHECK(a == b);
    CHECK(a > 0.0);
}

TEST_CASE("weight_at is pure under evaluation-order permutation") {
    const FieldSpec spec{7, FieldBounds{}};
    std::vector<LatticePoint> cells;
    for (std::int64_t x = 0; x < 20; ++x) {
        for (std::int64_t y = 0; y < 20; ++y) cells.push_back({x, y});
    }
    std::vector<double> forward, backward;
    for (const auto& c : cells) forward.push_back(weight_at(spec, c));
    for (auto it = cells.rbegin(); it != cells.rend(); ++it) backward.push_back(weight_at(spec, *it));
    std::reverse(backward.begin(), backward.end());
    CHECK(forward == backward);
}

TEST_CASE("row-batched weights equal scalar weights cell by cell") {
    const FieldSpec spec{123456789ull, FieldBounds{}};
    for (const std::int64_t s : {0, 1, 5, 17}) {
        // rows with both lane alignments at the left edge
        for (const std::int64_t a_lo : {-(s % 2 == 0 ? 8 : 9), -(s % 2 == 0 ? 6 : 7)}) {
            std::vector<double> row(13);
            fill_row_weights(spec, s, a_lo, row);
            for (std::size_t j = 0; j < row.size(); ++j) {
                const auto p = from_sum_transverse(s, a_lo + 2 * static_cast<std::int64_t>(j));
                CHECK(row[j] == weight_at(spec, p));
            }
        }
    }
}

TEST_CASE("point outside the field region is rejected") {
    FieldSpec spec{3, FieldBounds{0, 10, 10}};
    CHECK_THROWS_AS(weight_at(spec, {100, 100}), RegionViolation);
    CHECK_NOTHROW(weight_at(spec, {2, 2}));
}

TEST_CASE("empirical Exp(1) moments over 1e6 cells") {
    const FieldSpec spec{2024, FieldBounds{}};
    double sum = 0.0;
    std::int64_t above_one = 0;
    std::vector<double> row(1000);
    for (std::int64_t s = 0; s < 1000; ++s) {
        fill_row_weights(spec, s, -((s % 2 == 0) ? 1000 : 999), row);
        for (const double w : row) {
            sum += w;
            if (w > 1.0) ++above_one;
        }
    }
    const double mean = sum / 1e6;
    CHECK(mean > 0.995);
    CHECK(mean < 1.005);
    const double tail = static_cast<double>(above_one) / 1e6;
    CHECK(std::abs(tail - std::exp(-1.0)) < 0.002);
}

TEST_CASE("Kolmogorov-Smirnov statistic below the 1% critical value") {
    const FieldSpec spec{99, FieldBounds{}};
    const std::size_t n = 100000;
    std::vector<double> sample;
    sample.reserve(n);
    std::vector<double> row(500);
    for (std::int64_t s = 0; s < 200; ++s) {
        fill_row_weights(spec, s, -((s % 2 == 0) ? 500 : 499), row);
        sample.insert(sample.end(), row.begin(), row.end());
    }
    std::sort(sample.begin(), sample.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = 1.0 - std::exp(-sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    const double critical_1pct = 1.6276 / std::sqrt(static_cast<double>(n));
    CHECK(d < critical_1pct);
}

TEST_CASE("distinct seeds give empirically uncorrelated fields") {
    const FieldSpec a{111, FieldBounds{}};
    const FieldSpec b{222, FieldBounds{}};
    const std::size_t n = 100000;
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    std::vector<double> ra(500), rb(500);
    for (std::int64_t s = 0; s < 200; ++s) {
        const std::int64_t a_lo = (s % 2 == 0) ? -500 : -499;
        fill_row_weights(a, s, a_lo, ra);
        fill_row_weights(b, s, a_lo, rb);
        for (std::size_t j = 0; j < ra.size(); ++j) {
            sa += ra[j];
            sb += rb[j];
            saa += ra[j] * ra[j];
            sbb += rb[j] * rb[j];
            sab += ra[j] * rb[j];
        }
    }
    const double nn = static_cast<double>(n);
    const double corr = (sab - sa * sb / nn) /
                        std::sqrt((saa - sa * sa / nn) * (sbb - sb * sb / nn));
    CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("initial conditions on L_0") {
    const auto flat = InitialCondition::flat();
    const auto droplet = InitialCondition::droplet();
    CHECK(initial_condition_at(flat, {7, -7}) == ExtReal::finite(0.0));
    CHECK(initial_condition_at(droplet, {0, 0}) == ExtReal::finite(0.0));
    CHECK(initial_condition_at(droplet, {5, -5}).is_excluded());
    CHECK_THROWS_AS(initial_condition_at(flat, {1, 0}), std::domain_error);

    const auto table = InitialCondition::table({{0, ExtReal::finite(1.5)}, {3, ExtReal::finite(-2.0)}});
    CHECK(initial_condition_at(table, {0, 0}) == ExtReal::finite(1.5));
    CHECK(initial_condition_at(table, {3, -3}) == ExtReal::finite(-2.0));
    CHECK(initial_condition_at(table, {1, -1}).is_excluded());
}

TEST_CASE("stationary initial condition: anchored walk with variance 8k") {
    const auto pi = InitialCondition::stationary(5);
    CHECK(pi.at_offset(0) == ExtReal::finite(0.0));
    // walk consistency: pi(k) - pi(k-1) equals the increment stream
    double acc = 0.0;
    for (std::int64_t k = 1; k <= 20; ++k) {
        acc += pi.stationary_increment(k);
        CHECK(pi.at_offset(k).value() == doctest::Approx(acc).epsilon(1e-12));
    }

    const std::int64_t k = 50;
    const std::size_t replicas = 4000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < replicas; ++i) {
        const auto ic = InitialCondition::stationary(mix_seed(909, i));
        const double v = ic.at_offset(k).value();
        sum += v;
        sum2 += v * v;
    }
    const double nn = static_cast<double>(replicas);
    const double var = (sum2 - sum * sum / nn) / (nn - 1.0);
    // increments have variance Var(Exp(1/2) - Exp(1/2)) = 8, so Var(pi(k)) = 8k
    CHECK(var > 8.0 * k * 0.9);
    CHECK(var < 8.0 * k * 1.1);
}
