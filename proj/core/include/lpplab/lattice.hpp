#pragma once

#include <cstdint>
#include <compare>
#include <stdexcept>

namespace lpplab {

// Lattice site (x, y) on Z^2. Passage times run over up/right paths, so the
// natural coordinates are the anti-diagonal index s = x + y and the
// transverse offset a = x - y. s and a always share parity.
struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;

    std::int64_t coord_sum() const { return x + y; }    // s
    std::int64_t transverse() const { return x - y; }   // a

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

// Coordinatewise partial order: u precedes v iff an up/right path can join them.
inline bool precedes(const LatticePoint& u, const LatticePoint& v) {
    return u.x <= v.x && u.y <= v.y;
}

inline LatticePoint from_sum_transverse(std::int64_t s, std::int64_t a) {
    if (((s ^ a) & 1) != 0) throw std::invalid_argument("lattice: s and a must share parity");
    return {(s + a) / 2, (s - a) / 2};
}

// Point on the anti-diagonal line L_r = {x + y = 2r}, offset m from (r, r).
inline LatticePoint line_point(std::int64_t r, std::int64_t m) {
    return {r + m, r - m};
}

// Extended real with a distinguished "excluded" element playing the role of
// -infinity in maxima. Excluded is propagated symbolically; no sentinel float
// ever enters arithmetic.
class ExtReal {
  public:
    ExtReal() = default;  // excluded
    static ExtReal excluded() { return ExtReal(); }
    static ExtReal finite(double v) {
        ExtReal e;
        e.finite_ = true;
        e.value_ = v;
        return e;
    }

    bool is_excluded() const { return !finite_; }
    bool is_finite() const { return finite_; }

    double value() const {
        if (!finite_) throw std::logic_error("ExtReal: value() on excluded");
        return value_;
    }
    double value_or(double fallback) const { return finite_ ? value_ : fallback; }

    ExtReal operator+(double w) const { return finite_ ? finite(value_ + w) : excluded(); }

    friend ExtReal max(const ExtReal& a, const ExtReal& b) {
        if (a.is_excluded()) return b;
        if (b.is_excluded()) return a;
        return finite(a.value_ >= b.value_ ? a.value_ : b.value_);
    }

    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }

  private:
    double value_ = 0.0;
    bool finite_ = false;
};

}  // namespace lpplab
