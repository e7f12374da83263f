#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lpplab/field.hpp"
#include "lpplab/lattice.hpp"
#include "lpplab/region.hpp"

namespace lpplab {

// Fills w[j] with the weights of cells (s, a_lo + 2j). Called once per
// anti-diagonal, so an std::function here costs nothing per cell.
using RowWeightFn = std::function<void(std::int64_t s, std::int64_t a_lo, std::span<double> w)>;
// Scalar access for path re-verification and oracles.
using CellWeightFn = std::function<double(const LatticePoint&)>;

struct WeightSource {
    RowWeightFn row;
    CellWeightFn cell;
};

WeightSource weights_from(const FieldSpec& spec);
WeightSource weights_from(CellWeightFn fn);

struct SolveOptions {
    bool keep_backpointers = false;
    // When false only the main diagonal and the final anti-diagonal are
    // retained; a sweep then peaks at O(row width) for values.
    bool keep_all_rows = true;
};

// Forward line-to-cone solution: X^pi_v over anti-diagonals, one bit of
// backpointer per cell when requested. Immutable after construction.
class PassageSolution {
  public:
    struct RowView {
        std::int64_t a_lo = 0;
        std::span<const double> values;
        std::span<const std::uint8_t> excluded;
    };

    std::int64_t base_sum() const { return base_sum_; }
    std::int64_t max_sum() const { return max_sum_; }
    bool has_backpointers() const { return !bits_.empty(); }
    bool all_excluded() const { return all_excluded_; }
    // Line index of the base line (base_sum / 2) for line-started solves;
    // nullopt for point-started solves.
    std::optional<std::int64_t> base_line() const { return base_line_; }
    const InitialCondition* initial_condition() const {
        return ic_ ? &*ic_ : nullptr;
    }
    const WeightSource& weights() const { return weights_; }

    bool covers(const LatticePoint& p) const;
    ExtReal value_at(const LatticePoint& p) const;
    // Value at (k, k); the whole diagonal trace is retained by every solve.
    ExtReal diagonal_value(std::int64_t k) const;
    RowView row(std::int64_t s) const;

    // Backpointer of an interior cell: true means the predecessor is
    // v - (1,0), false means v - (0,1). Ties at construction preferred v - (0,1).
    bool backpointer(const LatticePoint& p) const;

  private:
    friend class SweepBuilder;

    struct RowInfo {
        std::int64_t a_lo = 0;
        std::int64_t count = 0;
        // Logical cone bounds before any region clamp; cells inside them but
        // outside storage are region-excluded rather than uncomputed.
        std::int64_t cone_a_lo = 0;
        std::int64_t cone_a_hi = -1;
        std::size_t value_offset = 0;  // into values_/excluded_ when retained
        std::size_t bit_offset = 0;    // into bits_, in bits
        bool retained = false;
    };

    std::size_t row_index(std::int64_t s) const { return static_cast<std::size_t>(s - base_sum_); }

    std::int64_t base_sum_ = 0;
    std::int64_t max_sum_ = 0;
    std::optional<std::int64_t> base_line_;
    std::optional<InitialCondition> ic_;
    WeightSource weights_;
    std::vector<RowInfo> rows_;
    std::vector<double> values_;
    std::vector<std::uint8_t> excluded_;
    std::vector<std::uint64_t> bits_;
    std::vector<double> diag_values_;
    std::vector<std::uint8_t> diag_excluded_;
    std::int64_t diag_k_lo_ = 0;
    bool all_excluded_ = true;
};

// X^pi_v for every v in the cone {v <= (max_sum/2, max_sum/2), d(v) >= 0}
// intersected with `region`, from one sweep over anti-diagonals. X_r and X_n
// for the same field are both diagonal reads of one solution.
PassageSolution solve_forward(const FieldSpec& field, const InitialCondition& ic,
                              std::int64_t max_sum,
                              const RegionPredicate& region = RegionPredicate::all(),
                              const SolveOptions& opts = {});

// Same sweep with the base data placed on L_base_r instead of L_0 (the
// initial condition is read by offset along the base line).
PassageSolution solve_forward_from(const FieldSpec& field, const InitialCondition& ic,
                                   std::int64_t base_r, std::int64_t max_sum,
                                   const RegionPredicate& region = RegionPredicate::all(),
                                   const SolveOptions& opts = {});

// Point-started solve over {source <= v, d(v) <= max_sum} for geodesic tracing
// and constrained-rectangle passage times.
PassageSolution solve_from_point(const FieldSpec& field, const LatticePoint& source,
                                 std::int64_t max_sum,
                                 const RegionPredicate& region = RegionPredicate::all(),
                                 const SolveOptions& opts = {});

// Line-to-point profile {X^pi_v : v = (n+m, n-m), |m| <= half_width} from one
// trapezoidal sweep. Returned values are indexed by m - (-half_width).
struct LineProfile {
    std::int64_t n = 0;
    std::int64_t m_lo = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> excluded;
};
LineProfile solve_line_profile(const FieldSpec& field, const InitialCondition& ic,
                               std::int64_t n, std::int64_t half_width);

// Maximum weight of an up/right path from u to v staying inside `region`
// (endpoint weight excluded); excluded when no admissible path exists.
ExtReal point_to_point(const FieldSpec& field, const LatticePoint& u, const LatticePoint& v,
                       const RegionPredicate& region = RegionPredicate::all());

// Backward profile {T_{u, target} : u in L_r, |offset| <= half_width},
// computed by one backward sweep from the target (base 0 there).
struct BackwardProfile {
    LatticePoint target;
    std::int64_t r = 0;
    std::int64_t half_width = 0;  // requested, in offsets m along L_r
    std::int64_t m_lo = 0;
    std::vector<double> values;  // T_{(r+m, r-m), target}, m = m_lo + index
    bool clipped = false;

    std::int64_t m_hi() const { return m_lo + static_cast<std::int64_t>(values.size()) - 1; }
    double value_at(std::int64_t m) const;
};
BackwardProfile solve_backward(const FieldSpec& field, const LatticePoint& target,
                               std::int64_t r, std::int64_t half_width);

// Best weight among paths from L_0 to the segment |m| <= end_half_width of
// L_r that leave the strip |x - y| <= strip_half_width at least once.
// Two-layer sweep: a cell outside the strip promotes never-exited mass to the
// exited layer. Excluded when no admissible path exits.
ExtReal exit_constrained_max(const FieldSpec& field, const InitialCondition& ic, std::int64_t r,
                             double strip_half_width, std::int64_t end_half_width);

// Custom-weight variants (synthetic fields in tests, oracle cross-checks).
PassageSolution solve_forward_w(const WeightSource& w, const InitialCondition& ic,
                                std::int64_t base_r, std::int64_t max_sum,
                                const RegionPredicate& region = RegionPredicate::all(),
                                const SolveOptions& opts = {});
PassageSolution solve_from_point_w(const WeightSource& w, const LatticePoint& source,
                                   std::int64_t max_sum,
                                   const RegionPredicate& region = RegionPredicate::all(),
                                   const SolveOptions& opts = {});
ExtReal point_to_point_w(const WeightSource& w, const LatticePoint& u, const LatticePoint& v,
                         const RegionPredicate& region = RegionPredicate::all());
BackwardProfile solve_backward_w(const WeightSource& w, const LatticePoint& target,
                                 std::int64_t r, std::int64_t half_width);
ExtReal exit_constrained_max_w(const WeightSource& w, const InitialCondition& ic, std::int64_t r,
                               double strip_half_width, std::int64_t end_half_width);

}  // namespace lpplab
