#include "lpplab/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace lpplab::oracle {

namespace {

// Max over paths p -> v of (sum of weights excluding v), vertices in region.
ExtReal best_from(const CellWeightFn& w, const LatticePoint& p, const LatticePoint& v,
                  const RegionPredicate& region) {
    if (!precedes(p, v)) return ExtReal::excluded();
    if (!region.contains(p)) return ExtReal::excluded();
    if (p == v) return ExtReal::finite(0.0);
    const ExtReal right = best_from(w, {p.x + 1, p.y}, v, region);
    const ExtReal up = best_from(w, {p.x, p.y + 1}, v, region);
    const ExtReal tail = max(right, up);
    if (tail.is_excluded()) return ExtReal::excluded();
    return ExtReal::finite(tail.value() + w(p));
}

}  // namespace

ExtReal brute_point_to_point(const CellWeightFn& w, const LatticePoint& u, const LatticePoint& v,
                             const RegionPredicate& region) {
    if (!precedes(u, v)) throw std::invalid_argument("brute_point_to_point: u does not precede v");
    return best_from(w, u, v, region);
}

ExtReal brute_line_to_point(const CellWeightFn& w, const InitialCondition& ic,
                            std::int64_t base_r, const LatticePoint& v,
                            const RegionPredicate& region) {
    ExtReal best = ExtReal::excluded();
    const std::int64_t m_lo = base_r - v.y;
    const std::int64_t m_hi = v.x - base_r;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
        const ExtReal pi = ic.at_offset(m);
        if (pi.is_excluded()) continue;
        const ExtReal t = best_from(w, line_point(base_r, m), v, region);
        if (t.is_excluded()) continue;
        best = max(best, ExtReal::finite(t.value() + pi.value()));
    }
    return best;
}

namespace {

// DFS over whole paths, tracking whether the strip was ever left.
void exit_dfs(const CellWeightFn& w, const LatticePoint& p, std::int64_t r,
              std::int64_t strip_a, std::int64_t end_half_width, double acc, bool exited,
              ExtReal& best) {
    const std::int64_t a = p.transverse();
    exited = exited || (a < -strip_a || a > strip_a);
    if (p.coord_sum() == 2 * r) {
        const std::int64_t m = a / 2;
        if (exited && m >= -end_half_width && m <= end_half_width) {
            best = max(best, ExtReal::finite(acc));
        }
        return;
    }
    const double acc2 = acc + w(p);
    exit_dfs(w, {p.x + 1, p.y}, r, strip_a, end_half_width, acc2, exited, best);
    exit_dfs(w, {p.x, p.y + 1}, r, strip_a, end_half_width, acc2, exited, best);
}

}  // namespace

ExtReal brute_exit_constrained(const CellWeightFn& w, const InitialCondition& ic, std::int64_t r,
                               double strip_half_width, std::int64_t end_half_width) {
    const std::int64_t strip_a = static_cast<std::int64_t>(std::floor(strip_half_width));
    ExtReal best = ExtReal::excluded();
    for (std::int64_t m = -(r + end_half_width); m <= r + end_half_width; ++m) {
        const ExtReal pi = ic.at_offset(m);
        if (pi.is_excluded()) continue;
        ExtReal from_here = ExtReal::excluded();
        exit_dfs(w, line_point(0, m), r, strip_a, end_half_width, 0.0, false, from_here);
        if (from_here.is_finite()) {
            best = max(best, ExtReal::finite(from_here.value() + pi.value()));
        }
    }
    return best;
}

}  // namespace lpplab::oracle
