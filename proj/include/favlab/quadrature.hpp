#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace favlab {

struct QuadratureSpec {
    int panel_count = 16;
    int nodes_per_panel = 32;
    double refinement_tolerance = 1e-6;  // relative change between refinements
    int max_refinements = 5;             // panel doublings after the base level

    [[nodiscard]] bool valid() const {
        return panel_count >= 1 && nodes_per_panel >= 2 &&
               refinement_tolerance > 0.0 && max_refinements >= 0;
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // |last refinement change|
    bool converged = true;
    int panels_used = 0;
    std::int64_t evaluations = 0;
};

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_rule(int point_count);

// Composite grid over [a, b]: panel_count panels, nodes_per_panel points each.
struct ThetaGrid {
    std::vector<double> theta;
    std::vector<double> weight;
};
ThetaGrid theta_grid(double a, double b, int panel_count, int nodes_per_panel);

inline bool ladder_converged(double previous, double current, double tol) {
    const double scale = std::max(std::abs(current), 1e-300);
    return std::abs(current - previous) <= tol * scale;
}

// Fixed-node composite Gauss-Legendre with panel doubling: evaluates at
// panel_count panels, then doubles panels until the relative change drops
// below the tolerance or max_refinements is hit (result returned either way,
// flagged via `converged`). Node evaluations run in parallel per panel with a
// deterministic in-order reduction.
QuadratureResult integrate_theta(const std::function<double(double)>& g,
                                 double a, double b, const QuadratureSpec& spec,
                                 unsigned threads = 1);

}  // namespace favlab
