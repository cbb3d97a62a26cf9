#include "favlab/favard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "favlab/errors.hpp"
#include "favlab/numeric.hpp"
#include "favlab/pairs.hpp"
#include "favlab/parallel.hpp"
#include "favlab/rng.hpp"

namespace favlab {

FavardResult favard(const ModelId& model, int n, const QuadratureSpec& spec,
                    unsigned threads, const Limits& limits) {
    check_cell_budget(model, n, limits);
    const QuadratureResult q = integrate_theta(
        [&](double theta) {
            return support_length(model, n, Direction::from_angle(theta), limits);
        },
        0.0, M_PI, spec, threads);
    FavardResult out;
    out.model = model;
    out.n = n;
    out.value = q.value / M_PI;
    out.error_estimate = q.error_estimate / M_PI;
    out.node_count = q.evaluations;
    out.converged = q.converged;
    return out;
}

SectorResult sector_integral(const ModelId& model, int n, int j, double c1,
                             double c2, const QuadratureSpec& spec,
                             unsigned threads, const Limits& limits) {
    if (j < 0) throw std::invalid_argument("sector index must be >= 0");
    if (c1 > c2)
        throw empty_sector_error("inverted sector: c1 > c2");
    check_cell_budget(model, n, limits);

    SectorResult out;
    out.theta_lo = std::min(c1 * pow4(-j), M_PI);
    out.theta_hi = std::min(c2 * pow4(-j), M_PI);
    out.beyond_validity = n >= 1 && j > floor_log4(static_cast<double>(n)) + 1;
    if (out.theta_lo == out.theta_hi) {
        if (c1 == c2) return out;  // zero-width sector integrates to 0
        throw empty_sector_error("sector empty after clamping to [0, pi)");
    }
    const double phi_star = AxisFrame::phi_star();
    out.integral = integrate_theta(
        [&](double theta) {
            return support_length(model, n, Direction::from_angle(theta), limits);
        },
        phi_star + out.theta_lo, phi_star + out.theta_hi, spec, threads);
    return out;
}

namespace {

bool contains(const Interval& iv, double t) { return iv.lo <= t && t <= iv.hi; }

bool hit_four_corner(int n, const Direction& dir, double t) {
    struct Node {
        double x, y, side;
        int level;
    };
    std::vector<Node> stack;
    stack.push_back({0.0, 0.0, 1.0, 0});
    while (!stack.empty()) {
        const Node node = stack.back();
        stack.pop_back();
        if (!contains(project_square({node.x, node.y, node.side}, dir), t))
            continue;
        if (node.level == n) return true;
        const double child = 0.25 * node.side;
        const double off = 3.0 * child;
        for (int d = 0; d < 4; ++d) {
            stack.push_back({node.x + (d >> 1 ? off : 0.0),
                             node.y + (d & 1 ? off : 0.0), child,
                             node.level + 1});
        }
    }
    return false;
}

bool hit_random(const ModelId& model, int n, const Direction& dir, double t) {
    std::vector<RandomNode> stack;
    stack.push_back(random_root(model.seed));
    while (!stack.empty()) {
        const RandomNode node = stack.back();
        stack.pop_back();
        if (!contains(project_square(node.cell, dir), t)) continue;
        if (node.level == n) return true;
        for (int q = 0; q < 4; ++q) stack.push_back(random_child(node, q));
    }
    return false;
}

bool hit_sierpinski(int n, const Direction& dir, double t) {
    struct Node {
        std::int64_t p, q;
        int level;
    };
    std::vector<Node> stack;
    stack.push_back({0, 0, 0});
    while (!stack.empty()) {
        const Node node = stack.back();
        stack.pop_back();
        const Triangle tri = make_triangle(node.level, node.p, node.q);
        if (!contains(project_triangle(tri, dir), t)) continue;
        if (node.level == n) return true;
        stack.push_back({3 * node.p, 3 * node.q, node.level + 1});
        stack.push_back({3 * node.p + 2, 3 * node.q, node.level + 1});
        stack.push_back({3 * node.p, 3 * node.q + 2, node.level + 1});
    }
    return false;
}

}  // namespace

bool needle_hit(const ModelId& model, int n, const NeedleLine& line) {
    switch (model.kind) {
        case ModelKind::four_corner:
            return hit_four_corner(n, line.dir, line.offset);
        case ModelKind::random_four_corner:
            return hit_random(model, n, line.dir, line.offset);
        case ModelKind::sierpinski:
            return hit_sierpinski(n, line.dir, line.offset);
    }
    return false;
}

MonteCarloResult buffon_estimate(const ModelId& model, int n,
                                 std::uint64_t trials, std::uint64_t seed,
                                 unsigned threads) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    constexpr double kSqrt2 = 1.41421356237309504880168872421;

    const std::uint64_t chunk_trials = 65536;
    const std::size_t n_chunks =
        static_cast<std::size_t>((trials + chunk_trials - 1) / chunk_trials);
    std::vector<std::uint64_t> chunk_hits(n_chunks, 0);
    run_chunks(n_chunks, threads, [&](std::size_t c) {
        const std::uint64_t begin = c * chunk_trials;
        const std::uint64_t end = std::min(trials, begin + chunk_trials);
        std::uint64_t hits = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
            const double u1 = unit_double(stream_draw(seed, 2 * t));
            const double u2 = unit_double(stream_draw(seed, 2 * t + 1));
            const Direction dir = Direction::from_angle(M_PI * u1);
            const double center = 0.5 * dir.ux + 0.5 * dir.uy;
            const double offset = center + kSqrt2 * (2.0 * u2 - 1.0);
            if (needle_hit(model, n, {dir, offset})) ++hits;
        }
        chunk_hits[c] = hits;
    });

    MonteCarloResult out;
    out.trials = trials;
    out.seed = seed;
    for (std::uint64_t h : chunk_hits) out.hits += h;
    out.estimate = static_cast<double>(out.hits) / static_cast<double>(trials);
    out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) /
                              static_cast<double>(trials));
    out.favard_estimate = 2.0 * kSqrt2 * out.estimate;
    return out;
}

MedianResult median_support(const ModelId& model, int n, int grid_size,
                            unsigned threads, const Limits& limits) {
    if (grid_size < 16) throw std::invalid_argument("grid_size must be >= 16");
    check_cell_budget(model, n, limits);

    std::vector<double> values(static_cast<std::size_t>(grid_size));
    const std::size_t chunk = 64;
    const std::size_t n_chunks = (values.size() + chunk - 1) / chunk;
    run_chunks(n_chunks, threads, [&](std::size_t c) {
        const std::size_t begin = c * chunk;
        const std::size_t end = std::min(values.size(), begin + chunk);
        for (std::size_t i = begin; i < end; ++i) {
            const double theta =
                (static_cast<double>(i) + 0.5) * M_PI / grid_size;
            values[i] = support_length(model, n, Direction::from_angle(theta),
                                       limits);
        }
    });

    KahanSum reciprocal;
    for (double v : values) reciprocal.add(1.0 / v);

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t g = sorted.size();
    const double median = (g % 2 == 1)
                              ? sorted[g / 2]
                              : 0.5 * (sorted[g / 2 - 1] + sorted[g / 2]);

    MedianResult out;
    out.model = model;
    out.n = n;
    out.median = median;
    out.sample_count = g;
    out.reciprocal_integral = reciprocal.value() * (M_PI / grid_size);
    return out;
}

}  // namespace favlab
