#pragma once

#include <cstdint>
#include <vector>

#include "lpplab/estimate.hpp"

namespace lpplab {

// Two-sided Brownian motion at diffusivity 2 on a uniform grid over
// [-half_width, half_width], anchored to 0 at the origin and grown outward in
// both directions. Grid maxima stand in for continuum maxima.
struct BrownianPath {
    double half_width = 0.0;
    double step = 0.0;
    double diffusivity = 2.0;
    std::int64_t center = 0;  // index of x = 0
    std::vector<double> values;

    double x_of(std::int64_t i) const { return static_cast<double>(i - center) * step; }
    double value_at_zero() const { return values[static_cast<std::size_t>(center)]; }
    // Max over grid points with x in [lo, hi] (empty window is an error).
    double max_on(double lo, double hi) const;
};

BrownianPath sample_bm(double half_width, double step, std::uint64_t seed);

// Monte Carlo frequency of max_{x in I} W > max_{[-2M, 2M]} W - sqrt(eps)
// over two-sided paths on [-2M, 2M]; I = [i_lo, i_hi] must lie in [-M, M].
EstimateReport two_peak_mc(double M, double i_lo, double i_hi, double eps, std::int64_t replicas,
                           double step, std::uint64_t seed, int threads = 1);

// Closed-form bound C2(M) (m + sqrt(eps) sqrt(m) + eps) for the same event,
// with C2 from numerical quadrature of the three m-independent Gaussian
// integrals behind it.
double two_peak_bound(double M, double m, double eps);

// Monte Carlo frequency of the central-max coincidence event: the max over
// |x| <= lambda equals the max over |x| <= M and either some dyadic annulus
// 2^{k-1} lambda' <= |x| <= 2^k lambda' (k <= k*, 2^{k*} lambda' <= 8) comes
// within 2^{k(1/2-tau)} alpha sqrt(lambda') of it, or it exceeds
// W(0) + alpha^{-1} sqrt(lambda').
EstimateReport c_prime_event_mc(double M, double lambda, double lambda_prime, double alpha,
                                double tau, std::int64_t replicas, double step,
                                std::uint64_t seed, int threads = 1);

}  // namespace lpplab
