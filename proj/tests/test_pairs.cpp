#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "favlab/errors.hpp"
#include "favlab/numeric.hpp"
#include "favlab/pairs.hpp"
#include "favlab/projection.hpp"
#include "favlab/rng.hpp"
#include "support/oracles.hpp"

using namespace favlab;

namespace {

std::vector<AxisPoint> all_axis_points(int n) {
    std::vector<AxisPoint> pts;
    for_each_address(n, [&](const SquareAddress& a) {
        pts.push_back(axis_coordinates(a));
    });
    return pts;
}

}  // namespace

TEST_CASE("axis coordinates at level 1") {
    const double L = AxisFrame::length();
    // addresses in sigma order: (a,b) digit pairs (0,0),(0,3),(3,0),(3,3)
    const auto pts = all_axis_points(1);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].s == doctest::Approx(L / 8).epsilon(1e-15));
    CHECK(pts[0].sigma_word() == "0");
    CHECK(pts[2].s == doctest::Approx(5 * L / 8).epsilon(1e-15));
    CHECK(pts[2].sigma_word() == "2");
    for (int i = 0; i < 4; ++i)
        CHECK(pts[i].s == doctest::Approx((2 * i + 1) * L / 8).epsilon(1e-15));
    for (int i = 1; i < 4; ++i) CHECK(pts[i].s > pts[i - 1].s);
}

TEST_CASE("0X projections tile [0, L] with exact abutment") {
    // scaled endpoints 2x + y are exact dyadics: level-k tiles abut at
    // 3*m*4^-k bitwise
    for (int k : {1, 2, 4, 6}) {
        std::vector<double> lows;
        for_each_square({ModelKind::four_corner, 0}, k, [&](const Square& sq) {
            lows.push_back(2.0 * sq.x + sq.y);
        });
        std::sort(lows.begin(), lows.end());
        const double unit = pow4(-k);
        for (std::size_t m = 0; m < lows.size(); ++m) {
            CHECK(lows[m] == 3.0 * static_cast<double>(m) * unit);  // bitwise
        }
    }
}

TEST_CASE("four-adic distance") {
    const double L = AxisFrame::length();
    const auto pts = all_axis_points(2);
    // identical words: smallest interval containing both is level n
    CHECK(four_adic_distance(pts[3], pts[3]) ==
          doctest::Approx(L * pow4(-2)).epsilon(1e-15));
    // first digits differ: only the root interval contains both
    CHECK(four_adic_distance(pts[0], pts[15]) == doctest::Approx(L).epsilon(1e-15));
    // same first digit, second differs
    CHECK(four_adic_distance(pts[0], pts[3]) ==
          doctest::Approx(L / 4).epsilon(1e-15));
}

TEST_CASE("exhaustive pair invariants, n <= 5") {
    double fitted_gap_ratio = 0.0;  // max |dy| / d
    for (int n : {2, 3, 4, 5}) {
        const auto pts = all_axis_points(n);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                // distinct squares have distinct s and distinct y
                CHECK(pts[i].s_int != pts[j].s_int);
                CHECK(pts[i].y_int != pts[j].y_int);
                const double d = four_adic_distance(pts[i], pts[j]);
                const double ds = std::abs(pts[i].s - pts[j].s);
                const double dy = std::abs(pts[i].y - pts[j].y);
                CHECK(ds <= d);
                CHECK(dy <= kSqrt5 * d);
                fitted_gap_ratio = std::max(fitted_gap_ratio, dy / d);
            }
        }
    }
    MESSAGE("fitted gap-ratio constant |dy|/d = ", fitted_gap_ratio);
    CHECK(fitted_gap_ratio > 0.0);
    CHECK(fitted_gap_ratio <= kSqrt5);
}

TEST_CASE("classification conventions") {
    // |dy| < |ds| clamps to j = 0
    const PairBucket clamped = classify_deltas(0.9, 0.3);
    CHECK(clamped.j == 0);

    CHECK_THROWS_AS(
        classify_pair(all_axis_points(1)[2], all_axis_points(1)[2]),
        degenerate_pair_error);

    // same-parent adjacent squares (common prefix n-1) land at k+j near n
    const int n = 3;
    const auto pts = all_axis_points(n);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (common_prefix_length(pts[i], pts[j]) != n - 1) continue;
            const PairBucket b = classify_pair(pts[i], pts[j]);
            CHECK(b.k + b.j >= n - 2);
            CHECK(b.k + b.j <= n);
        }
    }
}

TEST_CASE("bucket census equals the all-pairs brute force") {
    CHECK(count_buckets(1).total() == 12);

    for (int n : {1, 2, 3, 4}) {
        const BucketTable fast = count_buckets(n);
        // brute force over all ordered pairs with the same floor rule
        std::map<std::pair<int, int>, std::uint64_t> brute;
        const auto pts = all_axis_points(n);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if (i == j) continue;
                const PairBucket b = classify_pair(pts[i], pts[j]);
                brute[{b.j, b.k}] += 1;
            }
        }
        CHECK(fast.counts == brute);
        const std::uint64_t cells = cell_count({ModelKind::four_corner, 0}, n);
        CHECK(fast.total() == cells * (cells - 1));
    }

    // occupied buckets stay within the slack band of the nominal ranges
    for (int n : {2, 4, 6}) {
        const BucketTable table = count_buckets(n);
        for (const auto& [bucket, count] : table.counts) {
            CHECK(bucket.first >= 0);
            CHECK(bucket.first <= n);
            CHECK(bucket.first + bucket.second >= -1);
            CHECK(bucket.first + bucket.second <= n + 1);
        }
        CHECK(table.max_bound_ratio() < 2.0);
    }
}

TEST_CASE("pair_overlap goldens") {
    const QuadratureSpec spec{2, 512, 1e-7, 2};
    // coincident squares: integral of the projected width is exactly 4*side
    for (int n : {0, 2, 4}) {
        const auto r = pair_overlap(0.0, 0.0, n, spec);
        CHECK(r.value == doctest::Approx(4.0 * pow4(-n)).epsilon(1e-12));
    }

    // unit squares touching at one corner; the dense-grid oracle and the
    // closed form agree with the quadrature value
    const auto touch = pair_overlap(1.0, 1.0, 0, spec);
    const double grid = oracles::dense_grid_integral(
        [](double t) {
            const double w = std::abs(std::cos(t)) + std::abs(std::sin(t));
            return std::max(0.0, w - std::abs(std::cos(t) + std::sin(t)));
        },
        100000);
    CHECK(touch.value == doctest::Approx(grid).epsilon(1e-6));
    CHECK(touch.value ==
          doctest::Approx(oracles::exact_pair_overlap(1.0, 1.0, 1.0)).epsilon(1e-9));
    CHECK(touch.value > 0.0);

    // symmetry in the two squares
    const SquareAddress a{2, 0b0011};
    const SquareAddress b{2, 0b1100};
    const auto ab = pair_overlap(a, b, spec);
    const auto ba = pair_overlap(b, a, spec);
    CHECK(ab.value == doctest::Approx(ba.value).epsilon(1e-14));
}

TEST_CASE("closed-form oracle matches dense grids on random deltas") {
    for (std::uint64_t k = 0; k < 12; ++k) {
        const double dx = 2.4 * unit_double(stream_draw(5, 3 * k)) - 1.2;
        const double dy = 2.4 * unit_double(stream_draw(5, 3 * k + 1)) - 1.2;
        const double side = pow4(-static_cast<int>(stream_draw(5, 3 * k + 2) % 4));
        const double grid = oracles::dense_grid_integral(
            [&](double t) {
                const double w =
                    side * (std::abs(std::cos(t)) + std::abs(std::sin(t)));
                return std::max(
                    0.0, w - std::abs(dx * std::cos(t) + dy * std::sin(t)));
            },
            200000);
        const double exact = oracles::exact_pair_overlap(dx, dy, side);
        CHECK(exact == doctest::Approx(grid).epsilon(2e-4));
    }
}

TEST_CASE("total_overlap equals the squared-multiplicity route") {
    const QuadratureSpec spec{2, 512, 5e-4, 3};
    const ModelId four{ModelKind::four_corner, 0};
    for (int n : {0, 1, 2, 3, 4}) {
        const OverlapTable table = total_overlap(n, spec);
        const auto direct = second_moment_theta(four, n, spec);
        CHECK(table.total ==
              doctest::Approx(direct.value).epsilon(1e-6));
        CHECK(table.diagonal == doctest::Approx(4.0).epsilon(1e-10));
        if (n == 0) CHECK(table.total == doctest::Approx(4.0).epsilon(1e-10));
    }
}

TEST_CASE("per-j partial overlap sums obey the sector bound") {
    const QuadratureSpec spec{2, 512, 5e-4, 2};
    for (int n : {2, 3, 4}) {
        const OverlapTable table = total_overlap(n, spec);
        for (int j : table.occupied_j()) {
            const double sum = table.per_j_sum(j);
            CHECK(sum <= 6.0 * n / pow4(2 * j));
        }
    }
}

TEST_CASE("per-pair overlap bound with the inverse 0Y gap") {
    // p_P <= C * 4^-2n / |dy| on every difference class, exact evaluation
    double fitted = 0.0;
    for (int n : {2, 3, 4, 5}) {
        const double unit = pow4(-n);
        const AxisDeltas words = axis_difference_words(n);
        for (std::size_t i = 0; i < words.delta_int.size(); ++i) {
            for (std::size_t j = 0; j < words.delta_int.size(); ++j) {
                if (words.delta_int[i] == 0 && words.delta_int[j] == 0) continue;
                const double dx = static_cast<double>(words.delta_int[i]) * unit;
                const double dy = static_cast<double>(words.delta_int[j]) * unit;
                const double dy_axis = std::abs(2.0 * dy - dx) * kInvSqrt5;
                const double p = oracles::exact_pair_overlap(dx, dy, unit);
                fitted = std::max(fitted, p * dy_axis * pow4(2 * n));
            }
        }
    }
    MESSAGE("fitted overlap-bound constant = ", fitted);
    CHECK(fitted > 1.0);
    CHECK(fitted < 4.0);
}

TEST_CASE("sector pair checker") {
    // calibrated run: zero violations at slack 1 with default constants
    const auto rep = sector_pair_check(4, 1, {}, 48, 2024);
    CHECK(rep.overlapping_pairs > 0);
    CHECK(rep.violations.empty());

    // wide j=0 sector: overlaps exist and all classify to small j
    const auto wide = sector_pair_check(4, 0, {0.25, 64.0, 1}, 32, 7);
    CHECK(wide.overlapping_pairs > 0);
    CHECK(wide.violations.empty());

    // empty sector
    SectorSpec inverted;
    inverted.c1 = 2.0;
    inverted.c2 = 1.0;
    const auto empty = sector_pair_check(3, 0, inverted, 16, 1);
    CHECK(empty.sampled_thetas == 0);
    CHECK(empty.overlapping_pairs == 0);
    CHECK(empty.violations.empty());
}
