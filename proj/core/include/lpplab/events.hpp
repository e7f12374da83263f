#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "lpplab/field.hpp"
#include "lpplab/passage.hpp"
#include "lpplab/scaling.hpp"

namespace lpplab {

// Parameters of the geometric events. theta controls the localization window
// of the profile maximum, alpha the decay margins, tau the decay-exponent
// slack, phi strip widths, L the barrier penalty, M the compact window, and
// epsilon the two-peaks gap.
struct EventParams {
    double theta = 0.5;
    double alpha = 0.5;
    double tau = 0.25;
    double phi = 4.0;
    double L = 2.0;
    double M = 1.0;
    double epsilon = 0.02;

    void validate() const {
        if (theta <= 0 || alpha <= 0 || tau <= 0 || phi <= 0 || L <= 0 || M <= 0 || epsilon <= 0) {
            throw std::invalid_argument("EventParams: all parameters must be positive");
        }
        if (tau >= 0.5) throw std::invalid_argument("EventParams: tau must lie in (0, 1/2)");
    }
};

struct CoverageError : std::runtime_error {
    explicit CoverageError(const std::string& what, double required)
        : std::runtime_error(what), required_half_width(required) {}
    double required_half_width;
};

// Decay event E_dec: the central window max of {T_{(r+m,-m+r), target}} is
// attained within |m| < theta r^{2/3}, stays below the center value plus
// 2 alpha^{-1} r^{1/3}, and every dyadic annulus 2^{j-1} r^{2/3} <= |m| <
// 2^j r^{2/3} sits below the central max minus 2 alpha 2^{j(1/2-tau)} r^{1/3}.
// Annuli stop at the geometric support edge; the outermost partial annulus is
// evaluated over its available portion.
bool indicator_e_dec(const BackwardProfile& profile, std::int64_t r, std::int64_t n,
                     const EventParams& p);

// Two-peaks event on a rescaled profile: max over [i_lo, i_hi] exceeds the
// max over [-2M, 2M] minus sqrt(epsilon).
bool indicator_two_peaks(const ScaledProfile& profile, double i_lo, double i_hi,
                         const EventParams& p);

// A path from L_0 to the segment |m| <= r^{2/3} of L_r exits the strip
// |x-y| <= phi r^{2/3} while keeping weight >= 4r - threshold_c1 phi^2 r^{1/3}.
bool indicator_large_tf(const FieldSpec& field, std::int64_t r, const EventParams& p,
                        double threshold_c1);
bool indicator_large_tf_w(const WeightSource& w, std::int64_t r, const EventParams& p,
                          double threshold_c1);

// Rectangle of height r whose transverse span is (inner_mult, outer_mult] times
// r^{2/3}, on the side of the diagonal given by `side`. penalty_mult, when
// set, replaces L as the multiplier of r^{1/3} in the threshold (the slab
// grid still comes from L); it admits the zero-penalty limit.
struct BarrierSpec {
    std::int64_t r = 0;
    double inner_mult = 0.5;  // theta
    double outer_mult = 4.0;  // phi
    int side = +1;
    std::optional<double> penalty_mult;
};

// Barrier event: on a deterministic grid of slab representatives, every
// ordered anchor pair with coordinate-sum separation >= r/L has constrained
// passage time at most (sqrt(dx)+sqrt(dy))^2 - L r^{1/3}. The surrogate
// replaces the unknown exact expectation and errs by O(r^{1/3}).
bool indicator_barrier(const FieldSpec& field, const BarrierSpec& region, const EventParams& p);
bool indicator_barrier_w(const WeightSource& w, const BarrierSpec& region, const EventParams& p);

enum class PeakLabel { A, B, C };

struct PeakClassification {
    std::int64_t j = 0;
    PeakLabel label = PeakLabel::C;
    std::int64_t argmax_offset = 0;  // m with the restricted-window argmax at (r+m, r-m)
};

// Restricted argmax over |m| <= M n^{2/3}, its dyadic-band index j with
// |m| in [j^{101}, (j+1)^{101}) r^{2/3} / 2, and the B/C refinement: B when
// the (log(j+2))^{10} r^{2/3} window max sits below the restricted max minus
// 1000 (log(j+2))^2 r^{1/3}.
PeakClassification classify_a_b_c(const BackwardProfile& profile, std::int64_t r, std::int64_t n,
                                  const EventParams& p);

}  // namespace lpplab
