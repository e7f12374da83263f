#include "lpplab/passage.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <utility>

namespace lpplab {

namespace {

struct Bounds {
    std::int64_t a_lo = 0;
    std::int64_t a_hi = -1;
    bool empty() const { return a_lo > a_hi; }
};

using BoundsFn = std::function<Bounds(std::int64_t s)>;
using BaseFill =
    std::function<void(std::int64_t a_lo, std::span<double>, std::span<std::uint8_t>)>;

// Snap bounds inward to the parity of s (cells on row s satisfy a == s mod 2).
Bounds normalized(Bounds b, std::int64_t s) {
    const std::int64_t parity = ((s % 2) + 2) % 2;
    auto align_up = [&](std::int64_t a) {
        return ((a % 2 + 2) % 2) == parity ? a : a + 1;
    };
    auto align_down = [&](std::int64_t a) {
        return ((a % 2 + 2) % 2) == parity ? a : a - 1;
    };
    b.a_lo = align_up(b.a_lo);
    b.a_hi = align_down(b.a_hi);
    return b;
}

inline void set_bit(std::vector<std::uint64_t>& bits, std::size_t idx, bool v) {
    if (v) bits[idx >> 6] |= (std::uint64_t{1} << (idx & 63));
}

inline bool get_bit(const std::vector<std::uint64_t>& bits, std::size_t idx) {
    return (bits[idx >> 6] >> (idx & 63)) & 1;
}

void fill_base_from_ic(const InitialCondition& ic, std::int64_t m_lo, std::span<double> v,
                       std::span<std::uint8_t> ex) {
    const std::int64_t count = static_cast<std::int64_t>(v.size());
    switch (ic.kind()) {
        case InitialConditionKind::Flat:
            std::fill(v.begin(), v.end(), 0.0);
            std::fill(ex.begin(), ex.end(), std::uint8_t{0});
            return;
        case InitialConditionKind::Droplet:
            std::fill(v.begin(), v.end(), 0.0);
            std::fill(ex.begin(), ex.end(), std::uint8_t{1});
            if (m_lo <= 0 && 0 < m_lo + count) ex[static_cast<std::size_t>(-m_lo)] = 0;
            return;
        case InitialConditionKind::Stationary: {
            // One anchored evaluation, then a deterministic increment walk.
            double pi = ic.at_offset(m_lo).value();
            for (std::int64_t j = 0; j < count; ++j) {
                v[static_cast<std::size_t>(j)] = pi;
                ex[static_cast<std::size_t>(j)] = 0;
                pi += ic.stationary_increment(m_lo + j + 1);
            }
            return;
        }
        case InitialConditionKind::Table:
            for (std::int64_t j = 0; j < count; ++j) {
                const ExtReal e = ic.at_offset(m_lo + j);
                ex[static_cast<std::size_t>(j)] = e.is_excluded() ? 1 : 0;
                v[static_cast<std::size_t>(j)] = e.value_or(0.0);
            }
            return;
    }
    throw std::logic_error("fill_base_from_ic: bad kind");
}

}  // namespace

WeightSource weights_from(const FieldSpec& spec) {
    WeightSource w;
    w.row = [spec](std::int64_t s, std::int64_t a_lo, std::span<double> out) {
        fill_row_weights(spec, s, a_lo, out);
    };
    w.cell = [spec](const LatticePoint& p) { return weight_at(spec, p); };
    return w;
}

WeightSource weights_from(CellWeightFn fn) {
    WeightSource w;
    w.cell = fn;
    w.row = [fn](std::int64_t s, std::int64_t a_lo, std::span<double> out) {
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = fn(from_sum_transverse(s, a_lo + 2 * static_cast<std::int64_t>(j)));
        }
    };
    return w;
}

class SweepBuilder {
  public:
    static PassageSolution run(const WeightSource& w, std::optional<InitialCondition> ic,
                               std::optional<std::int64_t> base_line, std::int64_t base_sum,
                               std::int64_t max_sum, const BoundsFn& bounds,
                               const RegionPredicate* region, const SolveOptions& opts,
                               const BaseFill& base_fill,
                               Bounds clamp = {std::numeric_limits<std::int64_t>::min() / 4,
                                               std::numeric_limits<std::int64_t>::max() / 4}) {
        if (max_sum < base_sum) throw std::invalid_argument("solve: max_sum below base");
        if (region != nullptr && region->is_all()) region = nullptr;

        PassageSolution sol;
        sol.base_sum_ = base_sum;
        sol.max_sum_ = max_sum;
        sol.base_line_ = base_line;
        sol.ic_ = std::move(ic);
        sol.weights_ = w;

        const std::int64_t nrows = max_sum - base_sum + 1;
        sol.rows_.resize(static_cast<std::size_t>(nrows));
        std::size_t value_total = 0;
        std::size_t bit_total = 0;
        std::int64_t max_count = 0;
        for (std::int64_t s = base_sum; s <= max_sum; ++s) {
            auto& info = sol.rows_[sol.row_index(s)];
            const Bounds cone = normalized(bounds(s), s);
            info.cone_a_lo = cone.a_lo;
            info.cone_a_hi = cone.empty() ? cone.a_lo - 2 : cone.a_hi;
            const Bounds b =
                normalized({std::max(cone.a_lo, clamp.a_lo), std::min(cone.a_hi, clamp.a_hi)}, s);
            info.a_lo = b.a_lo;
            info.count = b.empty() ? 0 : (b.a_hi - b.a_lo) / 2 + 1;
            info.retained = opts.keep_all_rows || s == max_sum;
            if (info.retained) {
                info.value_offset = value_total;
                value_total += static_cast<std::size_t>(info.count);
            }
            if (opts.keep_backpointers) {
                info.bit_offset = bit_total;
                bit_total += static_cast<std::size_t>(info.count);
            }
            max_count = std::max(max_count, info.count);
        }
        sol.values_.resize(value_total);
        sol.excluded_.resize(value_total, 1);
        if (opts.keep_backpointers) sol.bits_.assign((bit_total + 63) / 64, 0);

        // diagonal trace over k with base_sum <= 2k <= max_sum
        sol.diag_k_lo_ = base_sum / 2 + ((base_sum % 2 != 0 && base_sum > 0) ? 1 : 0);
        const std::int64_t diag_k_hi = max_sum / 2 - ((max_sum % 2 != 0 && max_sum < 0) ? 1 : 0);
        const std::int64_t diag_n = std::max<std::int64_t>(0, diag_k_hi - sol.diag_k_lo_ + 1);
        sol.diag_values_.assign(static_cast<std::size_t>(diag_n), 0.0);
        sol.diag_excluded_.assign(static_cast<std::size_t>(diag_n), 1);

        std::vector<double> prev_v(static_cast<std::size_t>(max_count));
        std::vector<std::uint8_t> prev_e(static_cast<std::size_t>(max_count));
        std::vector<double> cur_v(static_cast<std::size_t>(max_count));
        std::vector<std::uint8_t> cur_e(static_cast<std::size_t>(max_count));
        std::vector<double> gain(static_cast<std::size_t>(max_count));

        bool any_finite = false;
        for (std::int64_t s = base_sum; s <= max_sum; ++s) {
            const auto& info = sol.rows_[sol.row_index(s)];
            const std::int64_t count = info.count;
            if (count == 0) {
                std::swap(prev_v, cur_v);
                std::swap(prev_e, cur_e);
                prev_e.assign(prev_e.size(), 1);
                continue;
            }
            if (s == base_sum) {
                base_fill(info.a_lo, std::span<double>(cur_v.data(), count),
                          std::span<std::uint8_t>(cur_e.data(), count));
            } else {
                const auto& prev = sol.rows_[sol.row_index(s - 1)];
                if (prev.count > 0) {
                    w.row(s - 1, prev.a_lo,
                          std::span<double>(gain.data(), static_cast<std::size_t>(prev.count)));
                    for (std::int64_t j = 0; j < prev.count; ++j) {
                        gain[static_cast<std::size_t>(j)] += prev_v[static_cast<std::size_t>(j)];
                    }
                }
                for (std::int64_t j = 0; j < count; ++j) {
                    const std::int64_t a = info.a_lo + 2 * j;
                    const std::int64_t j_up = (a + 1 - prev.a_lo) >> 1;  // pred v-(0,1), a+1
                    const std::int64_t j_left = j_up - 1;                // pred v-(1,0), a-1
                    const bool ok_left = j_left >= 0 && j_left < prev.count &&
                                         prev_e[static_cast<std::size_t>(j_left)] == 0;
                    const bool ok_up = j_up >= 0 && j_up < prev.count &&
                                       prev_e[static_cast<std::size_t>(j_up)] == 0;
                    double val = 0.0;
                    bool from_left = false;
                    std::uint8_t ex = 0;
                    if (ok_left && ok_up) {
                        const double gl = gain[static_cast<std::size_t>(j_left)];
                        const double gu = gain[static_cast<std::size_t>(j_up)];
                        from_left = gl > gu;  // tie prefers v-(0,1)
                        val = from_left ? gl : gu;
                    } else if (ok_up) {
                        val = gain[static_cast<std::size_t>(j_up)];
                    } else if (ok_left) {
                        val = gain[static_cast<std::size_t>(j_left)];
                        from_left = true;
                    } else {
                        ex = 1;
                    }
                    cur_v[static_cast<std::size_t>(j)] = val;
                    cur_e[static_cast<std::size_t>(j)] = ex;
                    if (!sol.bits_.empty()) {
                        set_bit(sol.bits_, info.bit_offset + static_cast<std::size_t>(j),
                                from_left);
                    }
                }
            }
            if (region != nullptr) {
                for (std::int64_t j = 0; j < count; ++j) {
                    if (cur_e[static_cast<std::size_t>(j)] == 0 &&
                        !region->contains(from_sum_transverse(s, info.a_lo + 2 * j))) {
                        cur_e[static_cast<std::size_t>(j)] = 1;
                    }
                }
            }
            for (std::int64_t j = 0; j < count && !any_finite; ++j) {
                if (cur_e[static_cast<std::size_t>(j)] == 0) any_finite = true;
            }
            if (info.retained) {
                std::copy_n(cur_v.data(), count, sol.values_.data() + info.value_offset);
                std::copy_n(cur_e.data(), count, sol.excluded_.data() + info.value_offset);
            }
            if (s % 2 == 0 && s >= 2 * sol.diag_k_lo_) {
                const std::int64_t k = s / 2;
                const std::size_t di = static_cast<std::size_t>(k - sol.diag_k_lo_);
                if (di < sol.diag_values_.size() && 0 >= info.a_lo &&
                    0 <= info.a_lo + 2 * (count - 1)) {
                    const std::int64_t j = (0 - info.a_lo) >> 1;
                    sol.diag_values_[di] = cur_v[static_cast<std::size_t>(j)];
                    sol.diag_excluded_[di] = cur_e[static_cast<std::size_t>(j)];
                }
            }
            std::swap(prev_v, cur_v);
            std::swap(prev_e, cur_e);
        }
        sol.all_excluded_ = !any_finite;
        return sol;
    }
};

bool PassageSolution::covers(const LatticePoint& p) const {
    const std::int64_t s = p.coord_sum();
    if (s < base_sum_ || s > max_sum_) return false;
    const auto& info = rows_[row_index(s)];
    const std::int64_t a = p.transverse();
    return a >= info.cone_a_lo && a <= info.cone_a_hi;
}

ExtReal PassageSolution::value_at(const LatticePoint& p) const {
    if (!covers(p)) throw std::out_of_range("PassageSolution: point outside computed support");
    const std::int64_t s = p.coord_sum();
    const std::int64_t a = p.transverse();
    const auto& info = rows_[row_index(s)];
    // inside the cone but clamped out of storage: unreachable within the region
    if (a < info.a_lo || a > info.a_lo + 2 * (info.count - 1)) return ExtReal::excluded();
    if (a == 0 && s % 2 == 0) return diagonal_value(s / 2);
    if (!info.retained) {
        throw std::out_of_range("PassageSolution: row values not retained by this solve");
    }
    const std::size_t j = info.value_offset + static_cast<std::size_t>((a - info.a_lo) >> 1);
    return excluded_[j] ? ExtReal::excluded() : ExtReal::finite(values_[j]);
}

ExtReal PassageSolution::diagonal_value(std::int64_t k) const {
    const std::int64_t di = k - diag_k_lo_;
    if (di < 0 || di >= static_cast<std::int64_t>(diag_values_.size())) {
        throw std::out_of_range("PassageSolution: diagonal index outside solve");
    }
    const std::size_t i = static_cast<std::size_t>(di);
    return diag_excluded_[i] ? ExtReal::excluded() : ExtReal::finite(diag_values_[i]);
}

PassageSolution::RowView PassageSolution::row(std::int64_t s) const {
    if (s < base_sum_ || s > max_sum_) throw std::out_of_range("PassageSolution: row outside solve");
    const auto& info = rows_[row_index(s)];
    if (!info.retained) throw std::out_of_range("PassageSolution: row not retained");
    RowView v;
    v.a_lo = info.a_lo;
    v.values = std::span<const double>(values_.data() + info.value_offset,
                                       static_cast<std::size_t>(info.count));
    v.excluded = std::span<const std::uint8_t>(excluded_.data() + info.value_offset,
                                               static_cast<std::size_t>(info.count));
    return v;
}

bool PassageSolution::backpointer(const LatticePoint& p) const {
    if (bits_.empty()) throw std::logic_error("PassageSolution: backpointers not kept");
    if (!covers(p)) throw std::out_of_range("PassageSolution: point outside computed support");
    const auto& info = rows_[row_index(p.coord_sum())];
    return get_bit(bits_, info.bit_offset + static_cast<std::size_t>((p.transverse() - info.a_lo) >> 1));
}

PassageSolution solve_forward_w(const WeightSource& w, const InitialCondition& ic,
                                std::int64_t base_r, std::int64_t max_sum,
                                const RegionPredicate& region, const SolveOptions& opts) {
    if (max_sum < 2 * base_r) throw std::invalid_argument("solve_forward: max_sum below base line");
    if (max_sum % 2 != 0) throw std::invalid_argument("solve_forward: max_sum must be even");
    Bounds clamp{std::numeric_limits<std::int64_t>::min() / 4,
                 std::numeric_limits<std::int64_t>::max() / 4};
    if (auto env = region.transverse_envelope()) {
        clamp.a_lo = env->first;
        clamp.a_hi = env->second;
    }
    const BoundsFn cone = [max_sum](std::int64_t s) {
        return Bounds{-(max_sum - s), max_sum - s};
    };
    const BaseFill base = [&ic](std::int64_t a_lo, std::span<double> v,
                                std::span<std::uint8_t> e) {
        fill_base_from_ic(ic, a_lo / 2, v, e);
    };
    return SweepBuilder::run(w, ic, base_r, 2 * base_r, max_sum, cone, &region, opts, base, clamp);
}

PassageSolution solve_forward(const FieldSpec& field, const InitialCondition& ic,
                              std::int64_t max_sum, const RegionPredicate& region,
                              const SolveOptions& opts) {
    return solve_forward_w(weights_from(field), ic, 0, max_sum, region, opts);
}

PassageSolution solve_forward_from(const FieldSpec& field, const InitialCondition& ic,
                                   std::int64_t base_r, std::int64_t max_sum,
                                   const RegionPredicate& region, const SolveOptions& opts) {
    return solve_forward_w(weights_from(field), ic, base_r, max_sum, region, opts);
}

PassageSolution solve_from_point_w(const WeightSource& w, const LatticePoint& source,
                                   std::int64_t max_sum, const RegionPredicate& region,
                                   const SolveOptions& opts) {
    const std::int64_t s0 = source.coord_sum();
    const std::int64_t a0 = source.transverse();
    if (max_sum < s0) throw std::invalid_argument("solve_from_point: max_sum below source");
    Bounds clamp{std::numeric_limits<std::int64_t>::min() / 4,
                 std::numeric_limits<std::int64_t>::max() / 4};
    if (auto env = region.transverse_envelope()) {
        clamp.a_lo = env->first;
        clamp.a_hi = env->second;
    }
    const BoundsFn cone = [s0, a0](std::int64_t s) {
        return Bounds{a0 - (s - s0), a0 + (s - s0)};
    };
    const BaseFill base = [](std::int64_t, std::span<double> v, std::span<std::uint8_t> e) {
        v[0] = 0.0;
        e[0] = 0;
    };
    return SweepBuilder::run(w, std::nullopt, std::nullopt, s0, max_sum, cone, &region, opts,
                             base, clamp);
}

PassageSolution solve_from_point(const FieldSpec& field, const LatticePoint& source,
                                 std::int64_t max_sum, const RegionPredicate& region,
                                 const SolveOptions& opts) {
    return solve_from_point_w(weights_from(field), source, max_sum, region, opts);
}

LineProfile solve_line_profile(const FieldSpec& field, const InitialCondition& ic,
                               std::int64_t n, std::int64_t half_width) {
    const std::int64_t max_sum = 2 * n;
    const BoundsFn trapezoid = [max_sum, half_width](std::int64_t s) {
        const std::int64_t w = 2 * half_width + (max_sum - s);
        return Bounds{-w, w};
    };
    const WeightSource w = weights_from(field);
    const BaseFill base = [&ic](std::int64_t a_lo, std::span<double> v,
                                std::span<std::uint8_t> e) {
        fill_base_from_ic(ic, a_lo / 2, v, e);
    };
    SolveOptions opts;
    opts.keep_all_rows = false;
    const PassageSolution sol =
        SweepBuilder::run(w, ic, 0, 0, max_sum, trapezoid, nullptr, opts, base);
    const auto rv = sol.row(max_sum);
    LineProfile p;
    p.n = n;
    p.m_lo = rv.a_lo / 2;
    p.values.assign(rv.values.begin(), rv.values.end());
    p.excluded.assign(rv.excluded.begin(), rv.excluded.end());
    return p;
}

ExtReal point_to_point_w(const WeightSource& w, const LatticePoint& u, const LatticePoint& v,
                         const RegionPredicate& region) {
    if (!precedes(u, v)) throw std::invalid_argument("point_to_point: u does not precede v");
    const std::int64_t su = u.coord_sum(), au = u.transverse();
    const std::int64_t sv = v.coord_sum(), av = v.transverse();
    const BoundsFn diamond = [=](std::int64_t s) {
        return Bounds{std::max(au - (s - su), av - (sv - s)),
                      std::min(au + (s - su), av + (sv - s))};
    };
    const BaseFill base = [](std::int64_t, std::span<double> vals, std::span<std::uint8_t> e) {
        vals[0] = 0.0;
        e[0] = 0;
    };
    SolveOptions opts;
    opts.keep_all_rows = false;
    const PassageSolution sol =
        SweepBuilder::run(w, std::nullopt, std::nullopt, su, sv, diamond, &region, opts, base);
    const auto rv = sol.row(sv);
    const std::int64_t j = (av - rv.a_lo) >> 1;
    if (j < 0 || j >= static_cast<std::int64_t>(rv.values.size()) ||
        rv.excluded[static_cast<std::size_t>(j)]) {
        return ExtReal::excluded();
    }
    return ExtReal::finite(rv.values[static_cast<std::size_t>(j)]);
}

ExtReal point_to_point(const FieldSpec& field, const LatticePoint& u, const LatticePoint& v,
                       const RegionPredicate& region) {
    return point_to_point_w(weights_from(field), u, v, region);
}

BackwardProfile solve_backward_w(const WeightSource& w, const LatticePoint& target,
                                 std::int64_t r, std::int64_t half_width) {
    const std::int64_t st = target.coord_sum();
    const std::int64_t at = target.transverse();
    if (2 * r >= st || 2 * r < 0) throw std::invalid_argument("solve_backward: need 0 <= 2r < d(target)");
    if (half_width < 0) throw std::invalid_argument("solve_backward: negative half_width");

    BackwardProfile prof;
    prof.target = target;
    prof.r = r;
    prof.half_width = half_width;
    // geometric support of {u in L_r : u <= target}
    const std::int64_t support_lo = r - target.y;
    const std::int64_t support_hi = target.x - r;
    const std::int64_t m_lo = std::max(-half_width, support_lo);
    const std::int64_t m_hi = std::min(half_width, support_hi);
    prof.m_lo = m_lo;
    prof.clipped = (-half_width < support_lo) || (half_width > support_hi);
    if (prof.clipped) {
        std::cerr << "lpplab: solve_backward half_width " << half_width
                  << " exceeds geometric support, clipped to [" << m_lo << ", " << m_hi << "]\n";
    }
    if (m_lo > m_hi) throw std::invalid_argument("solve_backward: empty window");

    std::vector<double> next_v, cur_v, wbuf;
    std::int64_t next_a_lo = 0, next_count = 0;

    auto bounds_at = [&](std::int64_t s) {
        const std::int64_t back = st - s;
        const std::int64_t grow = s - 2 * r;
        return Bounds{std::max(at - back, 2 * m_lo - grow), std::min(at + back, 2 * m_hi + grow)};
    };

    for (std::int64_t s = st; s >= 2 * r; --s) {
        const Bounds b = normalized(bounds_at(s), s);
        const std::int64_t count = b.empty() ? 0 : (b.a_hi - b.a_lo) / 2 + 1;
        cur_v.resize(static_cast<std::size_t>(count));
        if (s == st) {
            cur_v[0] = 0.0;  // single target cell, endpoint weight excluded
        } else {
            wbuf.resize(static_cast<std::size_t>(count));
            w.row(s, b.a_lo, std::span<double>(wbuf.data(), wbuf.size()));
            for (std::int64_t j = 0; j < count; ++j) {
                const std::int64_t a = b.a_lo + 2 * j;
                const std::int64_t j_dn = (a - 1 - next_a_lo) >> 1;  // successor a-1 (v+(0,1))
                const std::int64_t j_up = j_dn + 1;                  // successor a+1 (v+(1,0))
                double best = 0.0;
                bool any = false;
                if (j_dn >= 0 && j_dn < next_count) {
                    best = next_v[static_cast<std::size_t>(j_dn)];
                    any = true;
                }
                if (j_up >= 0 && j_up < next_count) {
                    const double c = next_v[static_cast<std::size_t>(j_up)];
                    if (!any || c > best) best = c;
                    any = true;
                }
                if (!any) throw std::logic_error("solve_backward: cell with no successor");
                cur_v[static_cast<std::size_t>(j)] = best + wbuf[static_cast<std::size_t>(j)];
            }
        }
        std::swap(next_v, cur_v);
        next_a_lo = b.a_lo;
        next_count = count;
    }
    prof.values = std::move(next_v);
    prof.values.resize(static_cast<std::size_t>(next_count));
    return prof;
}

BackwardProfile solve_backward(const FieldSpec& field, const LatticePoint& target,
                               std::int64_t r, std::int64_t half_width) {
    return solve_backward_w(weights_from(field), target, r, half_width);
}

double BackwardProfile::value_at(std::int64_t m) const {
    const std::int64_t j = m - m_lo;
    if (j < 0 || j >= static_cast<std::int64_t>(values.size())) {
        throw std::out_of_range("BackwardProfile: offset outside window");
    }
    return values[static_cast<std::size_t>(j)];
}

ExtReal exit_constrained_max_w(const WeightSource& w, const InitialCondition& ic, std::int64_t r,
                               double strip_half_width, std::int64_t end_half_width) {
    if (strip_half_width < 0) throw std::invalid_argument("exit_constrained_max: negative strip");
    if (end_half_width < 0) throw std::invalid_argument("exit_constrained_max: negative end width");
    const std::int64_t strip_a = static_cast<std::int64_t>(std::floor(strip_half_width));
    const std::int64_t max_sum = 2 * r;

    auto bounds_at = [&](std::int64_t s) {
        const std::int64_t width = 2 * end_half_width + (max_sum - s);
        return Bounds{-width, width};
    };

    std::vector<double> v1, v2, n1, n2, wbuf, g1, g2;
    std::vector<std::uint8_t> e1, e2, ne1, ne2;
    std::int64_t prev_a_lo = 0, prev_count = 0;

    for (std::int64_t s = 0; s <= max_sum; ++s) {
        const Bounds b = normalized(bounds_at(s), s);
        const std::int64_t count = b.empty() ? 0 : (b.a_hi - b.a_lo) / 2 + 1;
        n1.resize(static_cast<std::size_t>(count));
        n2.resize(static_cast<std::size_t>(count));
        ne1.assign(static_cast<std::size_t>(count), 1);
        ne2.assign(static_cast<std::size_t>(count), 1);
        if (s == 0) {
            std::vector<double> base_v(static_cast<std::size_t>(count));
            std::vector<std::uint8_t> base_e(static_cast<std::size_t>(count));
            fill_base_from_ic(ic, b.a_lo / 2, std::span<double>(base_v),
                              std::span<std::uint8_t>(base_e));
            for (std::int64_t j = 0; j < count; ++j) {
                if (base_e[static_cast<std::size_t>(j)]) continue;
                const std::int64_t a = b.a_lo + 2 * j;
                const bool inside = (a >= -strip_a && a <= strip_a);
                auto& val = inside ? n1 : n2;
                auto& ex = inside ? ne1 : ne2;
                val[static_cast<std::size_t>(j)] = base_v[static_cast<std::size_t>(j)];
                ex[static_cast<std::size_t>(j)] = 0;
            }
        } else {
            wbuf.resize(static_cast<std::size_t>(prev_count));
            w.row(s - 1, prev_a_lo, std::span<double>(wbuf.data(), wbuf.size()));
            g1.resize(static_cast<std::size_t>(prev_count));
            g2.resize(static_cast<std::size_t>(prev_count));
            for (std::int64_t j = 0; j < prev_count; ++j) {
                g1[static_cast<std::size_t>(j)] = v1[static_cast<std::size_t>(j)] + wbuf[static_cast<std::size_t>(j)];
                g2[static_cast<std::size_t>(j)] = v2[static_cast<std::size_t>(j)] + wbuf[static_cast<std::size_t>(j)];
            }
            for (std::int64_t j = 0; j < count; ++j) {
                const std::int64_t a = b.a_lo + 2 * j;
                const std::int64_t j_up = (a + 1 - prev_a_lo) >> 1;
                const std::int64_t j_left = j_up - 1;
                double best1 = 0.0, best2 = 0.0;
                bool any1 = false, any2 = false;
                for (const std::int64_t jp : {j_left, j_up}) {
                    if (jp < 0 || jp >= prev_count) continue;
                    const std::size_t u = static_cast<std::size_t>(jp);
                    if (!e1[u] && (!any1 || g1[u] > best1)) {
                        best1 = g1[u];
                        any1 = true;
                    }
                    if (!e2[u] && (!any2 || g2[u] > best2)) {
                        best2 = g2[u];
                        any2 = true;
                    }
                }
                const bool inside = (a >= -strip_a && a <= strip_a);
                if (inside) {
                    if (any1) {
                        n1[static_cast<std::size_t>(j)] = best1;
                        ne1[static_cast<std::size_t>(j)] = 0;
                    }
                    if (any2) {
                        n2[static_cast<std::size_t>(j)] = best2;
                        ne2[static_cast<std::size_t>(j)] = 0;
                    }
                } else {
                    // outside the strip every arriving path counts as exited
                    if (any1 || any2) {
                        n2[static_cast<std::size_t>(j)] =
                            (!any1) ? best2 : (!any2 ? best1 : std::max(best1, best2));
                        ne2[static_cast<std::size_t>(j)] = 0;
                    }
                }
            }
        }
        std::swap(v1, n1);
        std::swap(v2, n2);
        std::swap(e1, ne1);
        std::swap(e2, ne2);
        prev_a_lo = b.a_lo;
        prev_count = count;
    }

    ExtReal best = ExtReal::excluded();
    for (std::int64_t j = 0; j < prev_count; ++j) {
        if (e2[static_cast<std::size_t>(j)]) continue;
        best = max(best, ExtReal::finite(v2[static_cast<std::size_t>(j)]));
    }
    return best;
}

ExtReal exit_constrained_max(const FieldSpec& field, const InitialCondition& ic, std::int64_t r,
                             double strip_half_width, std::int64_t end_half_width) {
    return exit_constrained_max_w(weights_from(field), ic, r, strip_half_width, end_half_width);
}

}  // namespace lpplab
