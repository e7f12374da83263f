#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lpplab/lattice.hpp"
#include "lpplab/passage.hpp"

namespace lpplab {

// Maximizing monotone path, ordered from its start (on the base line, or at
// the point source) to the endpoint. Consecutive points differ by (1,0) or
// (0,1); the weight matches the solver value at the endpoint.
struct GeodesicPath {
    std::vector<LatticePoint> points;
    double weight = 0.0;

    const LatticePoint& start() const { return points.front(); }
    const LatticePoint& endpoint() const { return points.back(); }
    std::int64_t start_sum() const { return points.front().coord_sum(); }
    std::int64_t end_sum() const { return points.back().coord_sum(); }
};

// Follows backpointers from the endpoint down to the base. The traced weight
// is recomputed from the field and checked against the solver value to 1e-9
// relative; a mismatch throws.
GeodesicPath trace_geodesic(const PassageSolution& sol, const LatticePoint& endpoint);

// The unique path vertex with coordinate sum 2r (the sum advances by one per
// step, so it exists and is unique in range).
LatticePoint crossing_point(const GeodesicPath& path, std::int64_t r);

// max |x - y| over the path vertices.
std::int64_t transversal_fluctuation(const GeodesicPath& path);

// Number of shared lattice points, optionally restricted to coordinate sums
// in [sum_range.first, sum_range.second]. Linear time: a monotone path has
// exactly one vertex per coordinate sum.
std::int64_t overlap(const GeodesicPath& a, const GeodesicPath& b,
                     std::optional<std::pair<std::int64_t, std::int64_t>> sum_range = std::nullopt);

// Maximizing point of a backward profile; ties resolved toward smaller
// transverse coordinate (on a line that also means smaller x).
LatticePoint argmax_on_line(const BackwardProfile& profile);

}  // namespace lpplab
