#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lpplab/lattice.hpp"
#include "lpplab/passage.hpp"

namespace lpplab {

// KPZ-rescaled weight profile: a lattice offset m maps to x = m / (2n)^{2/3}
// and a raw value T maps to 2^{-4/3} n^{-1/3} (T - 4n). Linear interpolation
// between grid points defines the continuous extension.
struct ScaledProfile {
    std::int64_t n = 0;
    std::vector<double> x;        // strictly increasing grid
    std::vector<ExtReal> values;  // excluded plays the role of -infinity

    bool covers(double lo, double hi) const;
    // Interpolated value; throws outside the grid or on an excluded node.
    double value_at(double xq) const;
};

double kpz_x(std::int64_t n, std::int64_t m);          // m / (2n)^{2/3}
double kpz_scaled(std::int64_t n, double raw);         // (raw - 4n) / (2^{4/3} n^{1/3})
double kpz_raw(std::int64_t n, double scaled);         // inverse affine map

// Profile {T_{(m,-m), (n,n)}} in rescaled coordinates.
ScaledProfile rescale_point_profile(const BackwardProfile& raw, std::int64_t n);

// Flat-initial-data profile {X_{(n+m, n-m)}} in the same coordinates.
ScaledProfile rescale_flat_profile(const LineProfile& raw);
ScaledProfile rescale_flat_profile(std::span<const double> values, std::int64_t m_lo,
                                   std::int64_t n);

// Sample variance of L(x+h) - L(x) across replicas, with delete-1 jackknife
// standard error. Needs at least two replicas.
std::pair<double, double> increment_variance(std::span<const ScaledProfile> profiles, double x,
                                             double h);

}  // namespace lpplab
