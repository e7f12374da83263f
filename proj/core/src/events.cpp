#include "lpplab/events.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "lpplab/region.hpp"

namespace lpplab {

namespace {

// Max of the profile over offsets with lo <= |m| < hi (NaN if empty).
std::optional<double> band_max(const BackwardProfile& prof, double lo, double hi) {
    std::optional<double> best;
    const std::int64_t m_hi = prof.m_hi();
    auto scan = [&](std::int64_t from, std::int64_t to) {
        from = std::max(from, prof.m_lo);
        to = std::min(to, m_hi);
        for (std::int64_t m = from; m <= to; ++m) {
            const double abs_m = std::abs(static_cast<double>(m));
            if (abs_m < lo || abs_m >= hi) continue;
            const double v = prof.value_at(m);
            if (!best || v > *best) best = v;
        }
    };
    const std::int64_t from = static_cast<std::int64_t>(std::floor(lo));
    const std::int64_t to = static_cast<std::int64_t>(std::ceil(hi));
    scan(-to, -from);
    scan(from, to);
    return best;
}

}  // namespace

bool indicator_e_dec(const BackwardProfile& profile, std::int64_t r, std::int64_t n,
                     const EventParams& p) {
    p.validate();
    const double rho = std::pow(static_cast<double>(r), 2.0 / 3.0);
    const double scale = std::cbrt(static_cast<double>(r));
    const double support = static_cast<double>(n - r);
    if (static_cast<double>(-profile.m_lo) < support ||
        static_cast<double>(profile.m_hi()) < support) {
        throw CoverageError("indicator_e_dec: profile narrower than geometric support", support);
    }

    const auto central = band_max(profile, 0.0, rho);
    const auto localized = band_max(profile, 0.0, p.theta * rho);
    if (!central || !localized) return false;
    const double center_value = profile.value_at(0);
    // H'_0: attainment inside the theta-window, max controlled from above.
    if (*localized != *central) return false;
    if (!(*central < center_value + 2.0 / p.alpha * scale)) return false;

    // dyadic annuli, clipped at the support edge
    for (std::int64_t j = 1;; ++j) {
        const double lo = std::ldexp(rho, static_cast<int>(j - 1));
        if (lo > support) break;
        const double hi = std::min(std::ldexp(rho, static_cast<int>(j)), support + 0.5);
        const auto annulus = band_max(profile, lo, hi);
        if (!annulus) continue;
        const double deficit =
            2.0 * p.alpha * std::pow(2.0, static_cast<double>(j) * (0.5 - p.tau)) * scale;
        if (!(*annulus < *central - deficit)) return false;
    }
    return true;
}

bool indicator_two_peaks(const ScaledProfile& profile, double i_lo, double i_hi,
                         const EventParams& p) {
    p.validate();
    if (i_lo > i_hi) throw std::invalid_argument("indicator_two_peaks: empty interval");
    if (i_lo < -p.M || i_hi > p.M) {
        throw std::invalid_argument("indicator_two_peaks: interval not inside [-M, M]");
    }
    if (!profile.covers(-2.0 * p.M, 2.0 * p.M)) {
        throw CoverageError("indicator_two_peaks: profile does not cover [-2M, 2M]", 2.0 * p.M);
    }
    auto window_max = [&](double lo, double hi) {
        double best = profile.value_at(lo);
        best = std::max(best, profile.value_at(hi));
        for (std::size_t j = 0; j < profile.x.size(); ++j) {
            if (profile.x[j] <= lo || profile.x[j] >= hi) continue;
            if (profile.values[j].is_excluded()) continue;
            best = std::max(best, profile.values[j].value());
        }
        return best;
    };
    const double max_i = window_max(i_lo, i_hi);
    const double max_global = window_max(-2.0 * p.M, 2.0 * p.M);
    return max_i > max_global - std::sqrt(p.epsilon);
}

bool indicator_large_tf_w(const WeightSource& w, std::int64_t r, const EventParams& p,
                          double threshold_c1) {
    p.validate();
    const double rho = std::pow(static_cast<double>(r), 2.0 / 3.0);
    const std::int64_t end_half = static_cast<std::int64_t>(std::floor(rho));
    const ExtReal exit_max =
        exit_constrained_max_w(w, InitialCondition::flat(), r, p.phi * rho, end_half);
    if (exit_max.is_excluded()) return false;
    const double threshold = 4.0 * static_cast<double>(r) -
                             threshold_c1 * p.phi * p.phi * std::cbrt(static_cast<double>(r));
    return exit_max.value() >= threshold;
}

bool indicator_large_tf(const FieldSpec& field, std::int64_t r, const EventParams& p,
                        double threshold_c1) {
    return indicator_large_tf_w(weights_from(field), r, p, threshold_c1);
}

namespace {

struct Anchor {
    LatticePoint point;
};

// Slab corner/midpoint representatives, snapped to lattice parity inside the
// rectangle a in [a_lo, a_hi], s in [s_lo, s_hi].
void add_anchors(std::vector<Anchor>& out, std::int64_t s_lo, std::int64_t s_hi,
                 std::int64_t a_lo, std::int64_t a_hi) {
    if (s_lo > s_hi || a_lo > a_hi) return;
    const std::int64_t s_values[3] = {s_lo, (s_lo + s_hi) / 2, s_hi};
    for (const std::int64_t s : s_values) {
        const std::int64_t a_values[3] = {a_lo, (a_lo + a_hi) / 2, a_hi};
        for (std::int64_t a : a_values) {
            if (((a ^ s) & 1) != 0) {
                if (a + 1 <= a_hi) {
                    ++a;
                } else if (a - 1 >= a_lo) {
                    --a;
                } else {
                    continue;
                }
            }
            const LatticePoint cand = from_sum_transverse(s, a);
            bool dup = false;
            for (const auto& have : out) {
                if (have.point == cand) dup = true;
            }
            if (!dup) out.push_back({cand});
        }
    }
}

}  // namespace

bool indicator_barrier_w(const WeightSource& w, const BarrierSpec& region, const EventParams& p) {
    p.validate();
    const std::int64_t r = region.r;
    if (r <= 0 || region.outer_mult <= region.inner_mult) {
        throw std::invalid_argument("indicator_barrier: degenerate region");
    }
    const double rho = std::pow(static_cast<double>(r), 2.0 / 3.0);
    std::int64_t a_inner = static_cast<std::int64_t>(std::floor(region.inner_mult * rho)) + 1;
    std::int64_t a_outer = static_cast<std::int64_t>(std::floor(region.outer_mult * rho));
    if (region.side < 0) std::swap(a_inner, a_outer), a_inner = -a_inner, a_outer = -a_outer;
    const std::int64_t a_lo = std::min(a_inner, a_outer);
    const std::int64_t a_hi = std::max(a_inner, a_outer);
    if (a_lo > a_hi) throw std::invalid_argument("indicator_barrier: empty transverse span");

    const std::int64_t slab_count = std::max<std::int64_t>(2, std::llround(4.0 * p.L));
    const double min_sep = static_cast<double>(r) / p.L;
    if (static_cast<double>(2 * r) <= min_sep) {
        throw std::invalid_argument("indicator_barrier: region too small for the slab grid");
    }

    std::vector<Anchor> anchors;
    for (std::int64_t i = 0; i < slab_count; ++i) {
        const std::int64_t s_lo = i * 2 * r / slab_count;
        const std::int64_t s_hi = std::min((i + 1) * 2 * r / slab_count, 2 * r - 1) - ((i + 1 == slab_count) ? 0 : 1);
        add_anchors(anchors, s_lo, std::max(s_lo, s_hi), a_lo, a_hi);
    }
    std::sort(anchors.begin(), anchors.end(), [](const Anchor& a, const Anchor& b) {
        if (a.point.coord_sum() != b.point.coord_sum()) return a.point.coord_sum() < b.point.coord_sum();
        return a.point.transverse() < b.point.transverse();
    });

    const RegionPredicate rect = RegionPredicate::rectangle(0, 2 * r - 1, a_lo, a_hi);
    const double penalty =
        region.penalty_mult.value_or(p.L) * std::cbrt(static_cast<double>(r));

    SolveOptions opts;
    opts.keep_all_rows = true;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const LatticePoint u = anchors[i].point;
        std::int64_t top_needed = -1;
        for (std::size_t jdx = i + 1; jdx < anchors.size(); ++jdx) {
            const LatticePoint v = anchors[jdx].point;
            if (static_cast<double>(v.coord_sum() - u.coord_sum()) >= min_sep && precedes(u, v)) {
                top_needed = std::max(top_needed, v.coord_sum());
            }
        }
        if (top_needed < 0) continue;
        const PassageSolution sol = solve_from_point_w(w, u, top_needed, rect, opts);
        for (std::size_t jdx = i + 1; jdx < anchors.size(); ++jdx) {
            const LatticePoint v = anchors[jdx].point;
            if (static_cast<double>(v.coord_sum() - u.coord_sum()) < min_sep) continue;
            if (!precedes(u, v)) continue;  // vacuous: no admissible path
            if (!sol.covers(v)) continue;
            const ExtReal t = sol.value_at(v);
            if (t.is_excluded()) continue;
            const double dx = static_cast<double>(v.x - u.x);
            const double dy = static_cast<double>(v.y - u.y);
            const double mean_proxy =
                (std::sqrt(dx) + std::sqrt(dy)) * (std::sqrt(dx) + std::sqrt(dy));
            if (!(t.value() - mean_proxy <= -penalty)) return false;
        }
    }
    return true;
}

bool indicator_barrier(const FieldSpec& field, const BarrierSpec& region, const EventParams& p) {
    return indicator_barrier_w(weights_from(field), region, p);
}

PeakClassification classify_a_b_c(const BackwardProfile& profile, std::int64_t r, std::int64_t n,
                                  const EventParams& p) {
    p.validate();
    const double rho = std::pow(static_cast<double>(r), 2.0 / 3.0);
    const double window = p.M * std::pow(static_cast<double>(n), 2.0 / 3.0);
    const std::int64_t w = static_cast<std::int64_t>(std::floor(window));
    if (profile.m_lo > -std::min<std::int64_t>(w, n - r) || profile.m_hi() < std::min<std::int64_t>(w, n - r)) {
        throw CoverageError("classify_a_b_c: profile narrower than the M n^{2/3} window", window);
    }

    // restricted argmax, ties toward smaller transverse coordinate
    std::int64_t best_m = std::max(profile.m_lo, -w);
    double best_v = profile.value_at(best_m);
    for (std::int64_t m = best_m + 1; m <= std::min(profile.m_hi(), w); ++m) {
        const double v = profile.value_at(m);
        if (v > best_v) {
            best_v = v;
            best_m = m;
        }
    }

    PeakClassification out;
    out.argmax_offset = best_m;
    const double abs_m = std::abs(static_cast<double>(best_m));
    std::int64_t j = 0;
    while (abs_m >= 0.5 * std::pow(static_cast<double>(j + 1), 101.0) * rho) ++j;
    out.j = j;

    const double log_factor = std::log(static_cast<double>(j + 2));
    const double half = std::pow(log_factor, 10.0) * rho;
    const auto log_window_max = band_max(profile, 0.0, half + 0.5);
    const double deficit = 1000.0 * log_factor * log_factor * std::cbrt(static_cast<double>(r));
    out.label = (log_window_max && *log_window_max < best_v - deficit) ? PeakLabel::B : PeakLabel::C;
    return out;
}

}  // namespace lpplab
