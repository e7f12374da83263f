#include "lpplab/field.hpp"

#include <cmath>
#include <utility>

#include "lpplab/rng.hpp"

namespace lpplab {

namespace {

// Cells are paired two-per-Philox-block along a row: lane = bit 1 of a,
// block counter = (s, a >> 2). C++20 guarantees arithmetic shift on signed.
inline std::uint64_t cell_block(std::uint64_t key, std::int64_t s, std::int64_t a, int lane) {
    const std::uint64_t ctr_lo = static_cast<std::uint64_t>(s);
    const std::uint64_t ctr_hi = static_cast<std::uint64_t>(a >> 2);
    const auto words = Philox4x32::block64(key, ctr_lo, ctr_hi);
    return words[lane];
}

inline int cell_lane(std::int64_t a) { return static_cast<int>((a >> 1) & 1); }

constexpr std::uint64_t kStationaryStream = 0x7F4A7C15F39CC060ull;

}  // namespace

double weight_at(const FieldSpec& spec, const LatticePoint& u) {
    if (!spec.region.contains(u)) throw RegionViolation("weight_at: point outside field region");
    const std::int64_t s = u.coord_sum();
    const std::int64_t a = u.transverse();
    return bits_to_exp1(cell_block(spec.seed, s, a, cell_lane(a)));
}

void fill_row_weights(const FieldSpec& spec, std::int64_t s, std::int64_t a_lo,
                      std::span<double> w) {
    if (w.empty()) return;
    if (!spec.region.contains(from_sum_transverse(s, a_lo)) ||
        !spec.region.contains(from_sum_transverse(s, a_lo + 2 * (std::int64_t(w.size()) - 1)))) {
        throw RegionViolation("fill_row_weights: row extends outside field region");
    }
    const std::uint64_t ctr_lo = static_cast<std::uint64_t>(s);
    std::size_t j = 0;
    std::int64_t a = a_lo;
    // Leading cell on an odd lane has no partner in this row.
    if (cell_lane(a) == 1) {
        w[j++] = bits_to_exp1(cell_block(spec.seed, s, a, 1));
        a += 2;
    }
    while (j + 1 < w.size()) {
        const auto words = Philox4x32::block64(spec.seed, ctr_lo, static_cast<std::uint64_t>(a >> 2));
        w[j] = bits_to_exp1(words[0]);
        w[j + 1] = bits_to_exp1(words[1]);
        j += 2;
        a += 4;
    }
    if (j < w.size()) w[j] = bits_to_exp1(cell_block(spec.seed, s, a, cell_lane(a)));
}

InitialCondition InitialCondition::table(std::vector<std::pair<std::int64_t, ExtReal>> entries) {
    InitialCondition ic(InitialConditionKind::Table, 0);
    for (auto& [k, v] : entries) ic.table_[k] = v;
    return ic;
}

double InitialCondition::stationary_increment(std::int64_t k) const {
    // pair (X_k, Y_k) of Exp(1/2) variables from one block; increment X - Y.
    const auto words =
        Philox4x32::block64(mix_seed(sub_seed_, kStationaryStream), static_cast<std::uint64_t>(k), 0);
    return 2.0 * bits_to_exp1(words[0]) - 2.0 * bits_to_exp1(words[1]);
}

ExtReal InitialCondition::at_offset(std::int64_t k) const {
    switch (kind_) {
        case InitialConditionKind::Flat:
            return ExtReal::finite(0.0);
        case InitialConditionKind::Droplet:
            return k == 0 ? ExtReal::finite(0.0) : ExtReal::excluded();
        case InitialConditionKind::Stationary: {
            double sum = 0.0;
            if (k > 0) {
                for (std::int64_t i = 1; i <= k; ++i) sum += stationary_increment(i);
            } else {
                for (std::int64_t i = k + 1; i <= 0; ++i) sum -= stationary_increment(i);
            }
            return ExtReal::finite(sum);
        }
        case InitialConditionKind::Table: {
            const auto it = table_.find(k);
            return it == table_.end() ? ExtReal::excluded() : it->second;
        }
    }
    throw std::logic_error("InitialCondition: bad kind");
}

ExtReal initial_condition_at(const InitialCondition& ic, const LatticePoint& u) {
    if (u.coord_sum() != 0) {
        throw std::domain_error("initial_condition_at: point is not on L_0");
    }
    return ic.at_offset(u.x);
}

}  // namespace lpplab
