#include "lpplab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpplab {

GeodesicPath trace_geodesic(const PassageSolution& sol, const LatticePoint& endpoint) {
    if (!sol.has_backpointers()) {
        throw std::logic_error("trace_geodesic: solution has no backpointers");
    }
    const ExtReal end_value = sol.value_at(endpoint);
    if (end_value.is_excluded()) {
        throw std::runtime_error("trace_geodesic: endpoint is excluded, no admissible path");
    }

    GeodesicPath path;
    LatticePoint cur = endpoint;
    path.points.push_back(cur);
    while (cur.coord_sum() > sol.base_sum()) {
        cur = sol.backpointer(cur) ? LatticePoint{cur.x - 1, cur.y} : LatticePoint{cur.x, cur.y - 1};
        path.points.push_back(cur);
    }
    std::reverse(path.points.begin(), path.points.end());

    // Weight consistency: sum of weights excluding the endpoint, plus the
    // boundary value at the start for line-started solves.
    double traced = 0.0;
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        traced += sol.weights().cell(path.points[i]);
    }
    if (sol.base_line()) {
        const std::int64_t m = path.points.front().x - *sol.base_line();
        traced += sol.initial_condition()->at_offset(m).value();
    }
    const double ref = end_value.value();
    if (std::abs(traced - ref) > 1e-9 * std::max(1.0, std::abs(ref))) {
        throw std::logic_error("trace_geodesic: traced weight disagrees with solver value");
    }
    path.weight = ref;
    return path;
}

LatticePoint crossing_point(const GeodesicPath& path, std::int64_t r) {
    const std::int64_t target = 2 * r;
    if (target < path.start_sum() || target > path.end_sum()) {
        throw std::domain_error("crossing_point: line index outside the path's sum range");
    }
    return path.points[static_cast<std::size_t>(target - path.start_sum())];
}

std::int64_t transversal_fluctuation(const GeodesicPath& path) {
    std::int64_t tf = 0;
    for (const auto& p : path.points) tf = std::max(tf, std::abs(p.transverse()));
    return tf;
}

std::int64_t overlap(const GeodesicPath& a, const GeodesicPath& b,
                     std::optional<std::pair<std::int64_t, std::int64_t>> sum_range) {
    std::int64_t lo = std::max(a.start_sum(), b.start_sum());
    std::int64_t hi = std::min(a.end_sum(), b.end_sum());
    if (sum_range) {
        lo = std::max(lo, sum_range->first);
        hi = std::min(hi, sum_range->second);
    }
    std::int64_t count = 0;
    for (std::int64_t s = lo; s <= hi; ++s) {
        const auto& pa = a.points[static_cast<std::size_t>(s - a.start_sum())];
        const auto& pb = b.points[static_cast<std::size_t>(s - b.start_sum())];
        if (pa == pb) ++count;
    }
    return count;
}

LatticePoint argmax_on_line(const BackwardProfile& profile) {
    if (profile.values.empty()) throw std::invalid_argument("argmax_on_line: empty profile");
    std::size_t best = 0;
    for (std::size_t j = 1; j < profile.values.size(); ++j) {
        if (profile.values[j] > profile.values[best]) best = j;
    }
    return line_point(profile.r, profile.m_lo + static_cast<std::int64_t>(best));
}

}  // namespace lpplab
