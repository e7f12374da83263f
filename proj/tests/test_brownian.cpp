#include <cmath>
#include <vector>

#include "doctest.h"
#include "lpplab/brownian.hpp"
#include "lpplab/rng.hpp"

using namespace lpplab;

TEST_CASE("sample_bm anchors at zero and is deterministic") {
    const BrownianPath a = sample_bm(1.0, 0.01, 77);
    const BrownianPath b = sample_bm(1.0, 0.01, 77);
    CHECK(a.value_at_zero() == 0.0);
    CHECK(a.values == b.values);
    CHECK_THROWS_AS(sample_bm(1.0, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_bm(1.0, 2.0, 1), std::invalid_argument);
}

TEST_CASE("diffusivity 2: Var(W(1)) and independent increments") {
    const std::size_t reps = 100000;
    double s = 0, s2 = 0;
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (std::size_t k = 0; k < reps; ++k) {
        const BrownianPath p = sample_bm(1.0, 0.01, mix_seed(11, k));
        const double w1 = p.values.back();
        s += w1;
        s2 += w1 * w1;
        const double da = p.values[static_cast<std::size_t>(p.center + 50)] - p.value_at_zero();
        const double db = w1 - p.values[static_cast<std::size_t>(p.center + 50)];
        sa += da;
        sb += db;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    const double n = static_cast<double>(reps);
    const double var = (s2 - s * s / n) / (n - 1.0);
    CHECK(var > 1.96);
    CHECK(var < 2.04);
    const double corr =
        (sab - sa * sb / n) / std::sqrt((saa - sa * sa / n) * (sbb - sb * sb / n));
    CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("reflection principle cross-check") {
    // P(max over [0, t] W > h) = 2 P(W(t) > h) for Brownian motion
    const std::size_t reps = 20000;
    for (const double h : {0.5, 1.0}) {
        std::size_t hits = 0;
        for (std::size_t k = 0; k < reps; ++k) {
            const BrownianPath p = sample_bm(1.0, 1e-4, mix_seed(13, k));
            if (p.max_on(0.0, 1.0) > h) ++hits;
        }
        const double est = static_cast<double>(hits) / static_cast<double>(reps);
        const double analytic = 2.0 * 0.5 * std::erfc(h / (std::sqrt(2.0) * std::sqrt(2.0)));
        const double se = std::sqrt(est * (1 - est) / static_cast<double>(reps));
        CHECK(std::abs(est - analytic) < 3.0 * se + 0.006);  // grid-max bias allowance
    }
}

TEST_CASE("two-peak MC: degenerate windows") {
    // I equal to the whole window: its max is the global max
    const auto all = two_peak_mc(0.5, -1.0, 1.0, 0.01, 200, 1e-3, 3);
    CHECK(all.estimate == 1.0);
    // gap larger than any path range
    const auto huge = two_peak_mc(0.5, -0.01, 0.01, 1e6, 200, 1e-3, 4);
    CHECK(huge.estimate == 1.0);
    CHECK_THROWS_AS(two_peak_mc(0.5, -2.0, 2.5, 0.01, 10, 1e-3, 5), std::invalid_argument);
}

TEST_CASE("two-peak bound: quadrature against hand-computed integrals") {
    // the three reduced integrals are I1 = 2 sqrt(pi), I2 = 8, I3 = 2 sqrt(pi),
    // so C2(M) = 2 max(...) / (sqrt(4 pi) 4 pi M) = 16 / (sqrt(4 pi) 4 pi M)
    const double c2_analytic = 16.0 / (std::sqrt(4.0 * M_PI) * 4.0 * M_PI);
    const double eps = 0.25;
    const double tiny_m = 1e-18;
    CHECK(two_peak_bound(1.0, tiny_m, eps) ==
          doctest::Approx(c2_analytic * eps).epsilon(1e-7));  // m -> 0 limit is C2 eps
    CHECK(two_peak_bound(2.0, tiny_m, eps) ==
          doctest::Approx(c2_analytic * eps / 2.0).epsilon(1e-7));

    // monotone in each argument
    CHECK(two_peak_bound(1.0, 0.01, 0.02) < two_peak_bound(1.0, 0.02, 0.02));
    CHECK(two_peak_bound(1.0, 0.01, 0.02) < two_peak_bound(1.0, 0.01, 0.03));
    CHECK_THROWS_AS(two_peak_bound(1.0, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("two-peak MC sits below the bound and scales linearly") {
    const std::int64_t reps = 60000;
    // domination across the (m, eps) grid with m <= eps
    for (const double m : {0.005, 0.01, 0.02}) {
        for (const double eps : {0.005, 0.01, 0.02}) {
            if (m > eps) continue;
            const auto rep = two_peak_mc(1.0, -m / 2, m / 2, eps, 20000, 1e-3, 21);
            CHECK(rep.estimate <= two_peak_bound(1.0, m, eps));
        }
    }
    // rough linearity in eps at m = eps
    const auto at_02 = two_peak_mc(1.0, -0.01, 0.01, 0.02, reps, 1e-3, 22);
    const auto at_01 = two_peak_mc(1.0, -0.005, 0.005, 0.01, reps, 1e-3, 23);
    CHECK(at_01.estimate < 0.1);
    const double ratio = at_01.estimate / at_02.estimate;
    CHECK(ratio > 0.3);
    CHECK(ratio < 0.7);
}

TEST_CASE("two-peak MC: halving the step moves the estimate by less than 2 SE") {
    const std::int64_t reps = 40000;
    const auto coarse = two_peak_mc(1.0, -0.01, 0.01, 0.02, reps, 1e-3, 31);
    const auto fine = two_peak_mc(1.0, -0.01, 0.01, 0.02, reps, 5e-4, 32);
    const double se = std::hypot(coarse.stderr_value, fine.stderr_value);
    CHECK(std::abs(coarse.estimate - fine.estimate) < 2.0 * se);
}

TEST_CASE("c-prime event: validation and containment in the coincidence event") {
    CHECK_THROWS_AS(c_prime_event_mc(9.0, 0.1, 0.05, 0.2, 0.25, 10, 0.01, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(c_prime_event_mc(9.0, 0.05, 1.5, 0.2, 0.25, 10, 0.01, 1),
                    std::invalid_argument);

    // with alpha huge both clauses are implied by the coincidence, so the
    // frequency approaches (and never exceeds) the coincidence probability
    const double lambda = 0.05;
    const std::int64_t reps = 30000;
    const auto big_alpha = c_prime_event_mc(9.0, lambda, 0.1, 1000.0, 0.25, reps, 9e-3, 51);
    std::size_t coincide = 0;
    for (std::int64_t k = 0; k < reps; ++k) {
        const BrownianPath p = sample_bm(9.0, 9e-3, mix_seed(51, static_cast<std::uint64_t>(k)));
        if (p.max_on(-lambda, lambda) == p.max_on(-9.0, 9.0)) ++coincide;
    }
    const double p_coincide = static_cast<double>(coincide) / static_cast<double>(reps);
    CHECK(big_alpha.estimate <= p_coincide + 1e-12);
    CHECK(big_alpha.estimate >= 0.9 * p_coincide);
}

TEST_CASE("c-prime frequency decreases with alpha and is stable in lambda") {
    const std::int64_t reps = 40000;
    std::vector<double> freq;
    for (const double alpha : {0.4, 0.2, 0.1}) {
        freq.push_back(
            c_prime_event_mc(9.0, 0.05, 0.1, alpha, 0.25, reps, 9e-3, 61).estimate / 0.05);
    }
    CHECK(freq[0] > freq[1]);
    CHECK(freq[1] > freq[2]);

    const double at_05 = c_prime_event_mc(9.0, 0.05, 0.1, 0.2, 0.25, reps, 9e-3, 62).estimate / 0.05;
    const double at_02 = c_prime_event_mc(9.0, 0.02, 0.1, 0.2, 0.25, reps, 9e-3, 63).estimate / 0.02;
    CHECK(at_02 / at_05 > 1.0 / 3.0);
    CHECK(at_02 / at_05 < 3.0);
}
