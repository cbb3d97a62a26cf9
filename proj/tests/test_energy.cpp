#include <doctest.h>

#include <cmath>

#include "favlab/energy.hpp"
#include "favlab/errors.hpp"
#include "favlab/numeric.hpp"
#include "favlab/projection.hpp"
#include "favlab/rng.hpp"
#include "support/oracles.hpp"

using namespace favlab;

namespace {

const ModelId kFour{ModelKind::four_corner, 0};
const ModelId kSier{ModelKind::sierpinski, 0};

// direct-pair oracle with an arbitrary planar transform applied to the atoms
double direct_energy(const std::vector<WeightedPoint>& atoms) {
    KahanSum sum;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            if (i == j) continue;
            const double dx = atoms[i].x - atoms[j].x;
            const double dy = atoms[i].y - atoms[j].y;
            sum.add(atoms[i].mass * atoms[j].mass / std::hypot(dx, dy));
        }
    }
    return sum.value();
}

}  // namespace

TEST_CASE("riesz energy goldens") {
    CHECK(riesz_energy(kFour, 0).energy == 0.0);
    // 12 ordered pairs at distances 3/4 and 3*sqrt2/4, mass 1/16 each
    const double exact = 2.0 / 3.0 + std::sqrt(2.0) / 6.0;
    CHECK(riesz_energy(kFour, 1).energy == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("difference-class route equals the direct-pair oracle") {
    for (int n : {1, 2, 3}) {
        const EnergyResult fast = riesz_energy(kFour, n);
        const double direct = direct_energy(natural_measure_atoms(kFour, n));
        CHECK(fast.energy == doctest::Approx(direct).epsilon(1e-12));
        CHECK(fast.per_scale_total() == doctest::Approx(fast.energy).epsilon(1e-10));
    }
}

TEST_CASE("energy is invariant under the quarter-turn symmetry") {
    for (int n : {1, 2, 3}) {
        auto atoms = natural_measure_atoms(kFour, n);
        const double before = direct_energy(atoms);
        for (WeightedPoint& a : atoms) {
            const double x = a.x;
            a.x = a.y;
            a.y = 1.0 - x;
        }
        CHECK(direct_energy(atoms) == doctest::Approx(before).epsilon(1e-10));
        CHECK(riesz_energy(kFour, n).energy ==
              doctest::Approx(before).epsilon(1e-10));
    }
}

TEST_CASE("per-scale census tracks the dyadic pair model") {
    // pairs in scale bin k number about 4^k * (4^{n-k})^2, uniformly in k
    for (int n : {4, 5, 6}) {
        const EnergyResult e = riesz_energy(kFour, n);
        for (const auto& [k, count] : e.pair_counts_per_scale) {
            if (k < 0 || k >= n) continue;
            const double model_count = pow4(k) * pow4(2 * (n - k));
            const double ratio = static_cast<double>(count) / model_count;
            CHECK(ratio > 0.1);
            CHECK(ratio < 2.0);
        }
    }
}

TEST_CASE("ball average") {
    const QuadratureSpec spec{2, 256, 1e-6, 4};
    // epsilon beyond the projected diameter counts every pair at every angle
    // (sierpinski level-1 centroids span 2/3 < 0.9)
    const auto all = ball_average(kSier, 1, 0.9, spec);
    CHECK(all.value == doctest::Approx(M_PI).epsilon(1e-12));
    const auto single = ball_average(kFour, 0, 0.5, spec);
    CHECK(single.value == doctest::Approx(M_PI).epsilon(1e-12));

    // n=1 against a dense midpoint grid
    const double eps = pow4(-3);
    const auto atoms = natural_measure_atoms(kFour, 1);
    const double oracle = oracles::dense_grid_integral(
        [&](double t) {
            const double c = std::cos(t), s = std::sin(t);
            double sum = 0.0;
            for (const WeightedPoint& a : atoms) {
                for (const WeightedPoint& b : atoms) {
                    if (std::abs((a.x - b.x) * c + (a.y - b.y) * s) <= eps)
                        sum += a.mass * b.mass;
                }
            }
            return sum;
        },
        100000);
    const auto got = ball_average(kFour, 1, eps, {2, 512, 1e-6, 6});
    CHECK(got.value == doctest::Approx(oracle).epsilon(1e-4));

    CHECK_THROWS_AS(ball_average(kFour, 1, 0.0, spec), std::invalid_argument);
    CHECK_THROWS_AS(ball_average(kFour, 1, 1.5, spec), std::invalid_argument);
}

TEST_CASE("ball average is comparable to epsilon times the energy") {
    const QuadratureSpec spec{2, 256, 1e-4, 5};
    double lo = 1e300, hi = 0.0;
    for (int n : {2, 3}) {
        const double energy = riesz_energy(kFour, n).energy;
        const double self_term = pow4(-n);
        for (int k = 2; k <= n + 1; ++k) {
            const double eps = pow4(-k);
            const double ratio =
                ball_average(kFour, n, eps, spec).value /
                (eps * (energy + self_term));
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
    }
    MESSAGE("ball/energy comparability band = [", lo, ", ", hi, "]");
    CHECK(lo > 0.5);
    CHECK(hi < 32.0);
}

TEST_CASE("reciprocal support integral sits under the moment-ratio chain") {
    // on a shared direction grid: 1/|support| <= second/(first^2) pointwise,
    // and the integrated ratio stays O(n)
    for (int n : {2, 3, 4}) {
        const int grid = 512;
        KahanSum recip, ratio;
        for (int i = 0; i < grid; ++i) {
            const double theta = (i + 0.5) * M_PI / grid;
            const ProjectionProfile p =
                profile(kFour, n, Direction::from_angle(theta));
            CHECK(1.0 / p.support_length <=
                  p.second_moment / (p.first_moment * p.first_moment) *
                      (1.0 + 1e-12));
            recip.add(1.0 / p.support_length);
            ratio.add(p.second_moment / (p.first_moment * p.first_moment));
        }
        const double recip_integral = recip.value() * M_PI / grid;
        const double ratio_integral = ratio.value() * M_PI / grid;
        CHECK(recip_integral <= ratio_integral);
        CHECK(ratio_integral <= 4.0 * n);
    }
}

TEST_CASE("direct-pair models and budgets") {
    CHECK(riesz_energy(kSier, 3).energy > 0.0);
    const ModelId random{ModelKind::random_four_corner, 42};
    CHECK(riesz_energy(random, 3).energy > 0.0);
    Limits tiny;
    tiny.max_direct_pair_cells = 8;
    CHECK_THROWS_AS(riesz_energy(kSier, 3, 1, tiny), budget_error);
    Limits classy;
    classy.max_class_level = 2;
    CHECK_THROWS_AS(riesz_energy(kFour, 3, 1, classy), budget_error);
}
