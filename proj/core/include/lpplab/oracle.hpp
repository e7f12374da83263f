#pragma once

#include <cstdint>

#include "lpplab/field.hpp"
#include "lpplab/lattice.hpp"
#include "lpplab/passage.hpp"
#include "lpplab/region.hpp"

namespace lpplab::oracle {

// Exhaustive path-enumeration references for the dynamic-programming solvers.
// Deliberately naive recursion over individual up/right steps; no code shared
// with the sweep engine. Only usable on small coordinate sums.

// Max of sum of weights along u -> v excluding v, all vertices inside region.
ExtReal brute_point_to_point(const CellWeightFn& w, const LatticePoint& u, const LatticePoint& v,
                             const RegionPredicate& region = RegionPredicate::all());

// Line-to-point value max_u (T_{u,v} + pi(u)) over starts on L_base_r.
ExtReal brute_line_to_point(const CellWeightFn& w, const InitialCondition& ic,
                            std::int64_t base_r, const LatticePoint& v,
                            const RegionPredicate& region = RegionPredicate::all());

// Best weight among paths from L_0 to {(r+m, r-m) : |m| <= end_half_width}
// having at least one vertex with |x-y| > strip_half_width.
ExtReal brute_exit_constrained(const CellWeightFn& w, const InitialCondition& ic, std::int64_t r,
                               double strip_half_width, std::int64_t end_half_width);

}  // namespace lpplab::oracle
