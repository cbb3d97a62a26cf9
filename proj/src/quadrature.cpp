#include "favlab/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "favlab/numeric.hpp"
#include "favlab/parallel.hpp"

namespace favlab {

namespace {

GaussRule compute_gauss_rule(int m) {
    if (m < 1) throw std::invalid_argument("gauss rule needs >= 1 point");
    GaussRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_m.
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < m; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = m * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[m - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_rule(int point_count) {
    static std::mutex mutex;
    static std::unordered_map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(point_count);
    if (it == cache.end())
        it = cache.emplace(point_count, compute_gauss_rule(point_count)).first;
    return it->second;
}

ThetaGrid theta_grid(double a, double b, int panel_count, int nodes_per_panel) {
    const GaussRule& rule = gauss_rule(nodes_per_panel);
    ThetaGrid grid;
    grid.theta.reserve(static_cast<std::size_t>(panel_count) * nodes_per_panel);
    grid.weight.reserve(grid.theta.capacity());
    const double width = (b - a) / panel_count;
    for (int p = 0; p < panel_count; ++p) {
        const double lo = a + p * width;
        const double mid = lo + 0.5 * width;
        const double half = 0.5 * width;
        for (int i = 0; i < nodes_per_panel; ++i) {
            grid.theta.push_back(mid + half * rule.nodes[i]);
            grid.weight.push_back(half * rule.weights[i]);
        }
    }
    return grid;
}

QuadratureResult integrate_theta(const std::function<double(double)>& g,
                                 double a, double b, const QuadratureSpec& spec,
                                 unsigned threads) {
    if (!spec.valid()) throw std::invalid_argument("invalid quadrature spec");
    QuadratureResult result;
    if (!(b > a)) {
        result.converged = true;
        return result;
    }

    auto eval_grid = [&](int panels) {
        const ThetaGrid grid = theta_grid(a, b, panels, spec.nodes_per_panel);
        const std::size_t n_nodes = grid.theta.size();
        // one chunk per panel; reduce in panel order
        std::vector<double> panel_sums(panels, 0.0);
        run_chunks(static_cast<std::size_t>(panels), threads, [&](std::size_t p) {
            KahanSum local;
            const std::size_t begin = p * spec.nodes_per_panel;
            const std::size_t end = begin + spec.nodes_per_panel;
            for (std::size_t i = begin; i < end && i < n_nodes; ++i)
                local.add(grid.weight[i] * g(grid.theta[i]));
            panel_sums[p] = local.value();
        });
        KahanSum total;
        for (double s : panel_sums) total.add(s);
        result.evaluations += static_cast<std::int64_t>(n_nodes);
        return total.value();
    };

    int panels = spec.panel_count;
    double previous = eval_grid(panels);
    for (int r = 0; r < spec.max_refinements; ++r) {
        panels *= 2;
        const double current = eval_grid(panels);
        result.error_estimate = std::abs(current - previous);
        result.value = current;
        result.panels_used = panels;
        if (ladder_converged(previous, current, spec.refinement_tolerance)) {
            result.converged = true;
            return result;
        }
        previous = current;
    }
    if (spec.max_refinements == 0) {
        result.value = previous;
        result.panels_used = panels;
        result.error_estimate = std::abs(previous);  // no refinement to compare
    }
    result.converged = false;
    return result;
}

}  // namespace favlab
