#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "lpplab/lattice.hpp"

namespace lpplab {

// Pure O(1) membership predicate over lattice points. Strip and rectangle
// bounds are written in the (s, a) = (x+y, x-y) coordinates the passage
// solvers sweep in.
class RegionPredicate {
  public:
    enum class Kind { All, Strip, Rectangle, Complement, Intersection };

    RegionPredicate() : kind_(Kind::All) {}

    static RegionPredicate all() { return RegionPredicate(); }

    // |x - y| <= half_width
    static RegionPredicate strip(std::int64_t half_width) {
        RegionPredicate r;
        r.kind_ = Kind::Strip;
        r.a_hi_ = half_width;
        r.a_lo_ = -half_width;
        return r;
    }

    // sum_lo <= x + y <= sum_hi, a_lo <= x - y <= a_hi
    static RegionPredicate rectangle(std::int64_t sum_lo, std::int64_t sum_hi,
                                     std::int64_t a_lo, std::int64_t a_hi) {
        RegionPredicate r;
        r.kind_ = Kind::Rectangle;
        r.sum_lo_ = sum_lo;
        r.sum_hi_ = sum_hi;
        r.a_lo_ = a_lo;
        r.a_hi_ = a_hi;
        return r;
    }

    static RegionPredicate complement(RegionPredicate inner) {
        RegionPredicate r;
        r.kind_ = Kind::Complement;
        r.children_.push_back(std::move(inner));
        return r;
    }

    static RegionPredicate intersection(std::vector<RegionPredicate> parts) {
        RegionPredicate r;
        r.kind_ = Kind::Intersection;
        r.children_ = std::move(parts);
        return r;
    }

    Kind kind() const { return kind_; }
    bool is_all() const { return kind_ == Kind::All; }

    bool contains(const LatticePoint& p) const {
        switch (kind_) {
            case Kind::All:
                return true;
            case Kind::Strip: {
                const std::int64_t a = p.transverse();
                return a >= a_lo_ && a <= a_hi_;
            }
            case Kind::Rectangle: {
                const std::int64_t s = p.coord_sum();
                const std::int64_t a = p.transverse();
                return s >= sum_lo_ && s <= sum_hi_ && a >= a_lo_ && a <= a_hi_;
            }
            case Kind::Complement:
                return !children_[0].contains(p);
            case Kind::Intersection:
                for (const auto& c : children_) {
                    if (!c.contains(p)) return false;
                }
                return true;
        }
        return false;
    }

    // Transverse interval guaranteed to contain the region, when one is
    // cheaply known. Lets solvers clamp sweep rows; purely an optimization.
    std::optional<std::pair<std::int64_t, std::int64_t>> transverse_envelope() const {
        switch (kind_) {
            case Kind::Strip:
            case Kind::Rectangle:
                return std::pair{a_lo_, a_hi_};
            case Kind::Intersection: {
                std::optional<std::pair<std::int64_t, std::int64_t>> best;
                for (const auto& c : children_) {
                    if (auto e = c.transverse_envelope()) {
                        if (!best) {
                            best = e;
                        } else {
                            best->first = std::max(best->first, e->first);
                            best->second = std::min(best->second, e->second);
                        }
                    }
                }
                return best;
            }
            default:
                return std::nullopt;
        }
    }

  private:
    Kind kind_;
    std::int64_t sum_lo_ = 0, sum_hi_ = 0;
    std::int64_t a_lo_ = 0, a_hi_ = 0;
    std::vector<RegionPredicate> children_;
};

}  // namespace lpplab
