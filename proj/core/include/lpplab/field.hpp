#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "lpplab/lattice.hpp"

namespace lpplab {

struct RegionViolation : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Bounding box for a field in (s, a) coordinates. Weights outside are a
// contract violation, not zero.
struct FieldBounds {
    std::int64_t min_sum = 0;
    std::int64_t max_sum = 1 << 22;
    std::int64_t max_abs_transverse = 1 << 23;

    bool contains(const LatticePoint& u) const {
        const std::int64_t s = u.coord_sum();
        const std::int64_t a = u.transverse();
        return s >= min_sum && s <= max_sum && a >= -max_abs_transverse && a <= max_abs_transverse;
    }
};

// Seed-addressable i.i.d. Exp(1) environment. weight_at is a pure function of
// (seed, point): a Philox block keyed by the seed and countered by the cell
// coordinates, mapped through the exponential inverse CDF. No storage.
struct FieldSpec {
    std::uint64_t seed = 0;
    FieldBounds region;
};

double weight_at(const FieldSpec& spec, const LatticePoint& u);

// Fills w[j] with weights of the row cells (s, a_lo + 2j), j = 0..count-1.
// Same values as weight_at cell by cell; batched so each Philox block serves
// its two lanes.
void fill_row_weights(const FieldSpec& spec, std::int64_t s, std::int64_t a_lo,
                      std::span<double> w);

enum class InitialConditionKind { Flat, Droplet, Stationary, Table };

// Boundary data pi on L_0, indexed by the offset k of the point (k, -k).
// Flat: pi == 0. Droplet: 0 at the origin, excluded elsewhere. Stationary:
// two-sided random walk with Exp(1/2) - Exp(1/2) increments from its own
// sub-seed. Table: prescribed values, excluded off the listed points.
class InitialCondition {
  public:
    static InitialCondition flat() { return InitialCondition(InitialConditionKind::Flat, 0); }
    static InitialCondition droplet() { return InitialCondition(InitialConditionKind::Droplet, 0); }
    static InitialCondition stationary(std::uint64_t sub_seed) {
        return InitialCondition(InitialConditionKind::Stationary, sub_seed);
    }
    static InitialCondition table(std::vector<std::pair<std::int64_t, ExtReal>> entries);

    InitialConditionKind kind() const { return kind_; }
    std::uint64_t sub_seed() const { return sub_seed_; }

    // pi at offset k (the point (k, -k) on L_0).
    ExtReal at_offset(std::int64_t k) const;

    // Random-walk increment pi(k) - pi(k-1) of the stationary condition.
    double stationary_increment(std::int64_t k) const;

  private:
    InitialCondition(InitialConditionKind kind, std::uint64_t sub_seed)
        : kind_(kind), sub_seed_(sub_seed) {}

    InitialConditionKind kind_;
    std::uint64_t sub_seed_ = 0;
    std::map<std::int64_t, ExtReal> table_;
};

// pi(u) for u on L_0; anything off the line is a domain error.
ExtReal initial_condition_at(const InitialCondition& ic, const LatticePoint& u);

}  // namespace lpplab
