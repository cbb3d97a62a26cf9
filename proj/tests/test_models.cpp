#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "favlab/errors.hpp"
#include "favlab/models.hpp"
#include "favlab/numeric.hpp"

using namespace favlab;

namespace {
const ModelId kFour{ModelKind::four_corner, 0};
const ModelId kSier{ModelKind::sierpinski, 0};
}  // namespace

TEST_CASE("four-corner levels 0 and 1") {
    const auto level0 = enumerate_squares(kFour, 0);
    REQUIRE(level0.size() == 1);
    CHECK(level0[0].x == 0.0);
    CHECK(level0[0].y == 0.0);
    CHECK(level0[0].side == 1.0);

    const auto level1 = enumerate_squares(kFour, 1);
    REQUIRE(level1.size() == 4);
    std::set<std::pair<double, double>> corners;
    for (const Square& s : level1) {
        CHECK(s.side == 0.25);
        corners.insert({s.x, s.y});
    }
    CHECK(corners == std::set<std::pair<double, double>>{
                         {0.0, 0.0}, {0.0, 0.75}, {0.75, 0.0}, {0.75, 0.75}});
}

TEST_CASE("nesting and disjointness") {
    // every level-(n+1) square lies inside some level-n square
    for (int n : {0, 1, 2, 3}) {
        const auto parents = enumerate_squares(kFour, n);
        const auto children = enumerate_squares(kFour, n + 1);
        for (const Square& c : children) {
            bool inside = false;
            for (const Square& p : parents) {
                inside = inside || (c.x >= p.x && c.y >= p.y &&
                                    c.x + c.side <= p.x + p.side &&
                                    c.y + c.side <= p.y + p.side);
            }
            CHECK(inside);
        }
    }
    // pairwise disjoint interiors, total area 4^-n
    for (int n : {1, 2, 3}) {
        const auto cells = enumerate_squares(kFour, n);
        KahanSum area;
        for (const Square& s : cells) area.add(s.side * s.side);
        CHECK(area.value() == doctest::Approx(pow4(-n)).epsilon(1e-14));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            for (std::size_t j = i + 1; j < cells.size(); ++j) {
                const bool apart =
                    cells[i].x + cells[i].side <= cells[j].x ||
                    cells[j].x + cells[j].side <= cells[i].x ||
                    cells[i].y + cells[i].side <= cells[j].y ||
                    cells[j].y + cells[j].side <= cells[i].y;
                CHECK(apart);
            }
        }
    }
}

TEST_CASE("wrong-model errors") {
    CHECK_THROWS_AS(enumerate_squares(kSier, 1), wrong_model_error);
    CHECK_THROWS_AS(
        for_each_difference_class(kSier, 1, [](const DifferenceClass&) {}),
        wrong_model_error);
}

TEST_CASE("budget errors") {
    Limits tiny;
    tiny.max_cells = 10;
    CHECK_THROWS_AS(enumerate_squares(kFour, 2, tiny), budget_error);
}

TEST_CASE("random model determinism and nesting") {
    const ModelId r1{ModelKind::random_four_corner, 1234};
    const auto a = enumerate_squares(r1, 2);
    const auto b = enumerate_squares(r1, 2);
    REQUIRE(a.size() == 16);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
    }
    const ModelId r2{ModelKind::random_four_corner, 1235};
    const auto c = enumerate_squares(r2, 2);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        any_diff = any_diff || a[i].x != c[i].x || a[i].y != c[i].y;
    CHECK(any_diff);

    // each quadrant of each parent holds exactly one child
    RandomNode root = random_root(77);
    for (int q = 0; q < 4; ++q) {
        const RandomNode child = random_child(root, q);
        CHECK(child.cell.side == 0.25);
        const double qx = root.cell.x + 0.5 * (q & 1);
        const double qy = root.cell.y + 0.5 * ((q >> 1) & 1);
        CHECK(child.cell.x >= qx);
        CHECK(child.cell.x + child.cell.side <= qx + 0.5);
        CHECK(child.cell.y >= qy);
        CHECK(child.cell.y + child.cell.side <= qy + 0.5);
    }
}

TEST_CASE("triangles") {
    const auto unit = enumerate_triangles(0);
    REQUIRE(unit.size() == 1);
    CHECK(unit[0].x0 == 0.0);
    CHECK(unit[0].x1 == 1.0);
    CHECK(unit[0].x2 == doctest::Approx(0.5).epsilon(1e-16));
    CHECK(unit[0].y2 == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));

    const auto level1 = enumerate_triangles(1);
    REQUIRE(level1.size() == 3);
    std::set<std::pair<double, double>> bases;
    for (const Triangle& t : level1) bases.insert({t.x0, t.x1});
    const double third = 1.0 / 3.0;
    CHECK(bases.size() == 3);
    for (const auto& [lo, hi] : bases)
        CHECK(hi - lo == doctest::Approx(third).epsilon(1e-15));

    CHECK(enumerate_triangles(5).size() == 243);

    // equilateral to 1e-12 at several levels
    for (int n : {2, 4}) {
        for_each_triangle(n, [&](const Triangle& t) {
            const double ab = std::hypot(t.x1 - t.x0, t.y1 - t.y0);
            const double bc = std::hypot(t.x2 - t.x1, t.y2 - t.y1);
            const double ca = std::hypot(t.x0 - t.x2, t.y0 - t.y2);
            CHECK(std::abs(ab - bc) < 1e-12);
            CHECK(std::abs(ab - ca) < 1e-12);
        });
    }
}

TEST_CASE("difference classes against brute force") {
    // n=1 goldens
    std::map<std::pair<double, double>, std::uint64_t> classes;
    for_each_difference_class(kFour, 1, [&](const DifferenceClass& c) {
        classes[{c.dx, c.dy}] = c.ordered_pair_count;
    });
    CHECK(classes.size() == 9);
    CHECK(classes[{0.0, 0.0}] == 4);
    CHECK(classes[{0.75, 0.0}] == 2);
    std::uint64_t total = 0;
    for (const auto& [key, c] : classes) total += c;
    CHECK(total == 16);

    // exactness for n <= 4: class counts equal all-pairs tallies
    for (int n : {2, 3, 4}) {
        std::map<std::pair<double, double>, std::uint64_t> brute;
        const auto cells = enumerate_squares(kFour, n);
        for (const Square& a : cells)
            for (const Square& b : cells)
                brute[{a.x - b.x, a.y - b.y}] += 1;
        std::map<std::pair<double, double>, std::uint64_t> from_classes;
        for_each_difference_class(kFour, n, [&](const DifferenceClass& c) {
            from_classes[{c.dx, c.dy}] = c.ordered_pair_count;
        });
        CHECK(from_classes == brute);
    }
}

TEST_CASE("natural measure atoms") {
    const auto atoms1 = natural_measure_atoms(kFour, 1);
    REQUIRE(atoms1.size() == 4);
    std::set<std::pair<double, double>> centers;
    for (const WeightedPoint& a : atoms1) {
        CHECK(a.mass == 0.25);
        centers.insert({a.x, a.y});
    }
    CHECK(centers == std::set<std::pair<double, double>>{
                         {0.125, 0.125}, {0.125, 0.875}, {0.875, 0.125},
                         {0.875, 0.875}});

    for (int n : {0, 2, 4}) {
        for (const ModelId& model :
             {kFour, kSier, ModelId{ModelKind::random_four_corner, 9}}) {
            KahanSum mass;
            for_each_atom(model, n, [&](const WeightedPoint& a) { mass.add(a.mass); });
            CHECK(mass.value() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    const auto s0 = natural_measure_atoms(kSier, 0);
    REQUIRE(s0.size() == 1);
    CHECK(s0[0].mass == 1.0);
    CHECK(s0[0].x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s0[0].y == doctest::Approx(std::sqrt(3.0) / 6).epsilon(1e-14));
}
