#include <doctest.h>

#include <cmath>

#include "favlab/numeric.hpp"
#include "favlab/quadrature.hpp"
#include "favlab/rng.hpp"

using namespace favlab;

TEST_CASE("integrate_theta golden integrals") {
    const QuadratureSpec spec{4, 16, 1e-10, 4};
    const auto sine = integrate_theta([](double t) { return std::sin(t); }, 0.0,
                                      M_PI, spec);
    CHECK(sine.converged);
    CHECK(sine.value == doctest::Approx(2.0).epsilon(1e-12));

    // kink at pi/2 falls on a panel edge with 4 panels
    const auto width = integrate_theta(
        [](double t) { return std::abs(std::cos(t)) + std::abs(std::sin(t)); },
        0.0, M_PI, spec);
    CHECK(width.value == doctest::Approx(4.0).epsilon(1e-12));

    const auto constant =
        integrate_theta([](double) { return 2.5; }, 0.0, 3.0, spec);
    CHECK(constant.value == doctest::Approx(7.5).epsilon(1e-14));

    const auto empty = integrate_theta([](double) { return 1.0; }, 1.0, 1.0, spec);
    CHECK(empty.value == 0.0);
}

TEST_CASE("polynomial exactness up to degree 2*nodes-1") {
    for (int nodes : {2, 5, 8}) {
        const int degree = 2 * nodes - 1;
        const QuadratureSpec spec{3, nodes, 1e-9, 2};
        const auto got = integrate_theta(
            [&](double t) { return ipow(t, degree); }, 0.0, 1.0, spec);
        CHECK(got.value ==
              doctest::Approx(1.0 / (degree + 1)).epsilon(1e-12));
        CHECK(got.error_estimate <= 1e-12);
    }
}

TEST_CASE("non-convergence is flagged, result still returned") {
    // one panel, two nodes, zero allowed refinements on a curvy integrand
    const QuadratureSpec tight{1, 2, 1e-15, 0};
    const auto r = integrate_theta([](double t) { return std::abs(std::cos(3 * t)); },
                                   0.0, M_PI, tight);
    CHECK_FALSE(r.converged);
    CHECK(r.value > 0.0);

    const QuadratureSpec cap1{1, 2, 1e-15, 1};
    const auto r1 = integrate_theta(
        [](double t) { return std::abs(std::cos(3 * t)); }, 0.0, M_PI, cap1);
    CHECK_FALSE(r1.converged);
    CHECK(r1.error_estimate > 0.0);
}

TEST_CASE("gauss rule sanity") {
    for (int m : {2, 3, 16, 129, 512}) {
        const GaussRule& rule = gauss_rule(m);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(m));
        KahanSum wsum;
        for (double w : rule.weights) {
            CHECK(w > 0.0);
            wsum.add(w);
        }
        CHECK(wsum.value() == doctest::Approx(2.0).epsilon(1e-13));
        for (std::size_t i = 1; i < rule.nodes.size(); ++i)
            CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
}

TEST_CASE("node evaluations reduce deterministically across thread counts") {
    auto bumpy = [](double t) { return std::exp(std::sin(7 * t)) + t; };
    const QuadratureSpec spec{8, 24, 1e-9, 3};
    const auto r1 = integrate_theta(bumpy, 0.0, M_PI, spec, 1);
    const auto r4 = integrate_theta(bumpy, 0.0, M_PI, spec, 4);
    CHECK(r1.value == r4.value);  // bitwise
    CHECK(r1.panels_used == r4.panels_used);
}
