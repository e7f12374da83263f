#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "lpplab/field.hpp"
#include "lpplab/geodesic.hpp"
#include "lpplab/passage.hpp"

using namespace lpplab;

namespace {

WeightSource table_weights(std::map<std::pair<std::int64_t, std::int64_t>, double> table,
                           double fallback = 0.0) {
    auto fn = [table = std::move(table), fallback](const LatticePoint& p) {
        const auto it = table.find({p.x, p.y});
        return it == table.end() ? fallback : it->second;
    };
    return weights_from(CellWeightFn(fn));
}

SolveOptions with_bits() {
    SolveOptions o;
    o.keep_backpointers = true;
    return o;
}

}  // namespace

TEST_CASE("trace picks the heavier branch on the 2x2 block") {
    const auto w = table_weights({{{0, 0}, 1.0}, {{1, 0}, 3.0}, {{0, 1}, 2.0}, {{1, 1}, 4.0}});
    const auto sol = solve_from_point_w(w, {0, 0}, 2, RegionPredicate::all(), with_bits());
    const GeodesicPath path = trace_geodesic(sol, {1, 1});
    REQUIRE(path.points.size() == 3);
    CHECK(path.points[0] == LatticePoint{0, 0});
    CHECK(path.points[1] == LatticePoint{1, 0});  // 3 > 2
    CHECK(path.points[2] == LatticePoint{1, 1});
    CHECK(path.weight == sol.value_at({1, 1}).value());
}

TEST_CASE("exact predecessor tie resolves to v - (0,1)") {
    const auto w = weights_from(CellWeightFn([](const LatticePoint&) { return 1.0; }));
    const auto sol = solve_from_point_w(w, {0, 0}, 2, RegionPredicate::all(), with_bits());
    const GeodesicPath path = trace_geodesic(sol, {1, 1});
    CHECK(path.points[1] == LatticePoint{1, 0});  // (1,1) - (0,1)
}

TEST_CASE("tracing an excluded endpoint fails") {
    const FieldSpec field{3, FieldBounds{}};
    const auto sol =
        solve_forward(field, InitialCondition::droplet(), 6, RegionPredicate::all(), with_bits());
    CHECK_THROWS_AS(trace_geodesic(sol, {3, -1}), std::runtime_error);
}

TEST_CASE("monotone steps and weight consistency on a real field") {
    const FieldSpec field{17, FieldBounds{}};
    const std::int64_t n = 32;
    const auto sol =
        solve_forward(field, InitialCondition::flat(), 2 * n, RegionPredicate::all(), with_bits());
    const GeodesicPath path = trace_geodesic(sol, {n, n});
    REQUIRE(path.points.size() == static_cast<std::size_t>(2 * n + 1));
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        const auto d = LatticePoint{path.points[i + 1].x - path.points[i].x,
                                    path.points[i + 1].y - path.points[i].y};
        CHECK((d == LatticePoint{1, 0} || d == LatticePoint{0, 1}));
    }
    CHECK(path.start_sum() == 0);
    CHECK(path.weight == doctest::Approx(sol.diagonal_value(n).value()).epsilon(1e-12));
}

TEST_CASE("crossing point: endpoints and a scanned interior line") {
    const FieldSpec field{23, FieldBounds{}};
    const std::int64_t n = 64, r = 16;
    const auto sol =
        solve_forward(field, InitialCondition::flat(), 2 * n, RegionPredicate::all(), with_bits());
    const GeodesicPath path = trace_geodesic(sol, {n, n});
    CHECK(crossing_point(path, 0) == path.start());
    CHECK(crossing_point(path, n) == LatticePoint{n, n});
    const LatticePoint u0 = crossing_point(path, r);
    CHECK(u0.coord_sum() == 2 * r);
    std::int64_t found = 0;
    for (const auto& p : path.points) {
        if (p.coord_sum() == 2 * r) {
            CHECK(p == u0);
            ++found;
        }
    }
    CHECK(found == 1);  // unique vertex per coordinate sum
    CHECK_THROWS_AS(crossing_point(path, n + 1), std::domain_error);
}

TEST_CASE("transversal fluctuation") {
    GeodesicPath p;
    p.points = {{0, 0}, {1, 0}, {1, 1}};
    CHECK(transversal_fluctuation(p) == 1);

    GeodesicPath q;
    q.points = {{3, -3}, {4, -3}};
    CHECK(transversal_fluctuation(q) >= 6);  // the start vertex alone

    GeodesicPath alt;
    alt.points = {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}};
    CHECK(transversal_fluctuation(alt) == 1);
}

TEST_CASE("overlap counts shared vertices") {
    GeodesicPath a;
    a.points = {{0, 0}, {1, 0}, {1, 1}, {2, 1}};
    CHECK(overlap(a, a) == static_cast<std::int64_t>(a.points.size()));

    GeodesicPath b;
    b.points = {{2, -2}, {3, -2}, {3, -1}, {4, -1}};
    CHECK(overlap(a, b) == 0);  // vertex-disjoint
}

TEST_CASE("overlap of paths sharing a common suffix") {
    GeodesicPath a;
    a.points = {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}};
    GeodesicPath b;
    b.points = {{0, 0}, {0, 1}, {1, 1}, {2, 1}, {2, 2}};
    // set-intersection oracle
    std::int64_t brute = 0;
    for (const auto& pa : a.points) {
        for (const auto& pb : b.points) {
            if (pa == pb) ++brute;
        }
    }
    CHECK(overlap(a, b) == brute);
    CHECK(overlap(a, b, std::pair<std::int64_t, std::int64_t>{3, 4}) == 2);  // the shared suffix
    CHECK(overlap(a, b, std::pair<std::int64_t, std::int64_t>{1, 2}) == 0);
}

TEST_CASE("argmax on synthetic profiles") {
    BackwardProfile prof;
    prof.target = {10, 10};
    prof.r = 2;
    prof.m_lo = -3;
    prof.values = {0.0, 1.0, 3.0, 2.5, 1.0, 0.5, 0.2};
    CHECK(argmax_on_line(prof) == line_point(2, -1));

    prof.values = {0.0, 2.0, 1.0, 2.0, 0.0, 0.0, 0.0};
    CHECK(argmax_on_line(prof) == line_point(2, -2));  // tie toward smaller transverse
}

TEST_CASE("argmax agrees with the forward-traced geodesic start") {
    for (const std::uint64_t seed : {61ull, 62ull, 63ull}) {
        const FieldSpec field{seed, FieldBounds{}};
        const std::int64_t n = 48, r = 16;
        const auto fwd = solve_forward_from(field, InitialCondition::flat(), r, 2 * n,
                                            RegionPredicate::all(), with_bits());
        const GeodesicPath path = trace_geodesic(fwd, {n, n});
        const auto prof = solve_backward(field, {n, n}, r, n - r);
        CHECK(argmax_on_line(prof) == path.start());
    }
}

TEST_CASE("geodesics from one solution do not cross") {
    for (const std::uint64_t seed : {71ull, 72ull}) {
        const FieldSpec field{seed, FieldBounds{}};
        const std::int64_t n = 40;
        const auto sol = solve_forward(field, InitialCondition::flat(), 2 * (n + 3),
                                       RegionPredicate::all(), with_bits());
        const GeodesicPath left = trace_geodesic(sol, {n - 3, n + 3});
        const GeodesicPath right = trace_geodesic(sol, {n + 3, n - 3});
        for (std::int64_t s = 0; s <= 2 * n; ++s) {
            const auto& pl = left.points[static_cast<std::size_t>(s)];
            const auto& pr = right.points[static_cast<std::size_t>(s)];
            CHECK(pl.transverse() <= pr.transverse());
        }
    }
}
