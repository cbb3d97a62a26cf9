#include "favlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "favlab/errors.hpp"
#include "favlab/numeric.hpp"
#include "favlab/rng.hpp"

namespace favlab {

namespace {

constexpr double kHalfSqrt3 = 0.86602540378443864676372317075;

std::uint64_t pow_u64(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

void require_level(int n) {
    if (n < 0 || n > 26) throw std::invalid_argument("level out of range [0, 26]");
}

}  // namespace

std::string model_name(const ModelId& model) {
    switch (model.kind) {
        case ModelKind::four_corner: return "fourcorner";
        case ModelKind::sierpinski: return "sierpinski";
        case ModelKind::random_four_corner: return "random";
    }
    return "?";
}

ModelId parse_model(const std::string& name, std::uint64_t seed) {
    if (name == "fourcorner" || name == "four_corner" || name == "k")
        return {ModelKind::four_corner, 0};
    if (name == "sierpinski" || name == "s") return {ModelKind::sierpinski, 0};
    if (name == "random" || name == "random_four_corner")
        return {ModelKind::random_four_corner, seed};
    throw std::invalid_argument("unknown model: " + name);
}

std::uint64_t cell_count(const ModelId& model, int n) {
    require_level(n);
    return model.kind == ModelKind::sierpinski ? pow_u64(3, n) : pow_u64(4, n);
}

void check_cell_budget(const ModelId& model, int n, const Limits& limits) {
    const std::uint64_t count = cell_count(model, n);
    if (count > limits.max_cells)
        throw budget_error("cell count " + std::to_string(count) +
                           " exceeds budget " + std::to_string(limits.max_cells));
}

Square SquareAddress::cell() const {
    const double side = std::ldexp(1.0, -2 * level);
    return {static_cast<double>(corner_units_x()) * side,
            static_cast<double>(corner_units_y()) * side, side};
}

std::uint64_t SquareAddress::corner_units_x() const {
    std::uint64_t a = 0;
    for (int j = 0; j < level; ++j) a = 4 * a + 3ull * ((digit(j) >> 1) & 1);
    return a;
}

std::uint64_t SquareAddress::corner_units_y() const {
    std::uint64_t b = 0;
    for (int j = 0; j < level; ++j) b = 4 * b + 3ull * (digit(j) & 1);
    return b;
}

namespace {

void squares_dfs(int depth, int n, std::uint64_t ax, std::uint64_t ay, double side,
                 const std::function<void(const Square&)>& fn) {
    if (depth == n) {
        fn({static_cast<double>(ax) * side, static_cast<double>(ay) * side, side});
        return;
    }
    for (int d = 0; d < 4; ++d) {
        squares_dfs(depth + 1, n, 4 * ax + 3ull * ((d >> 1) & 1),
                    4 * ay + 3ull * (d & 1), side, fn);
    }
}

void random_dfs(const RandomNode& node, int n,
                const std::function<void(const Square&)>& fn) {
    if (node.level == n) {
        fn(node.cell);
        return;
    }
    for (int q = 0; q < 4; ++q) random_dfs(random_child(node, q), n, fn);
}

void triangles_dfs(int depth, int n, std::int64_t p, std::int64_t q,
                   const std::function<void(const Triangle&)>& fn) {
    if (depth == n) {
        fn(make_triangle(n, p, q));
        return;
    }
    triangles_dfs(depth + 1, n, 3 * p, 3 * q, fn);
    triangles_dfs(depth + 1, n, 3 * p + 2, 3 * q, fn);
    triangles_dfs(depth + 1, n, 3 * p, 3 * q + 2, fn);
}

}  // namespace

void for_each_square(const ModelId& model, int n,
                     const std::function<void(const Square&)>& fn) {
    require_level(n);
    switch (model.kind) {
        case ModelKind::four_corner:
            squares_dfs(0, n, 0, 0, std::ldexp(1.0, -2 * n), fn);
            return;
        case ModelKind::random_four_corner:
            random_dfs(random_root(model.seed), n, fn);
            return;
        case ModelKind::sierpinski:
            throw wrong_model_error("sierpinski has triangle cells; use for_each_triangle");
    }
}

void for_each_triangle(int n, const std::function<void(const Triangle&)>& fn) {
    require_level(n);
    triangles_dfs(0, n, 0, 0, fn);
}

std::vector<Square> enumerate_squares(const ModelId& model, int n,
                                      const Limits& limits) {
    check_cell_budget(model, n, limits);
    std::vector<Square> out;
    out.reserve(cell_count(model, n));
    for_each_square(model, n, [&](const Square& s) { out.push_back(s); });
    return out;
}

std::vector<Triangle> enumerate_triangles(int n, const Limits& limits) {
    check_cell_budget({ModelKind::sierpinski, 0}, n, limits);
    std::vector<Triangle> out;
    out.reserve(cell_count({ModelKind::sierpinski, 0}, n));
    for_each_triangle(n, [&](const Triangle& t) { out.push_back(t); });
    return out;
}

void for_each_address(int n, const std::function<void(const SquareAddress&)>& fn) {
    require_level(n);
    const std::uint64_t total = pow_u64(4, n);
    for (std::uint64_t w = 0; w < total; ++w) fn({n, w});
}

Triangle make_triangle(int n, std::int64_t p, std::int64_t q) {
    // q is even; m = p + q/2 indexes the base-projection slot. Each
    // coordinate is one correctly rounded division of exact integers, so
    // abutting cells share bit-identical endpoints and the top-level base
    // spans exactly [0, 1].
    const double den = static_cast<double>(pow_u64(3, n));
    const std::int64_t m = p + q / 2;
    Triangle t;
    t.x0 = static_cast<double>(m) / den;
    t.y0 = static_cast<double>(q) * kHalfSqrt3 / den;
    t.x1 = static_cast<double>(m + 1) / den;
    t.y1 = t.y0;
    t.x2 = 0.5 * (static_cast<double>(2 * m + 1) / den);
    t.y2 = static_cast<double>(q + 1) * kHalfSqrt3 / den;
    return t;
}

RandomNode random_root(std::uint64_t seed) {
    RandomNode node;
    node.cell = {0.0, 0.0, 1.0};
    node.key = mix64(seed + kGolden);
    node.units_x = 0;
    node.units_y = 0;
    node.level = 0;
    return node;
}

RandomNode random_child(const RandomNode& parent, int quadrant) {
    RandomNode child;
    child.key = split_key(parent.key, static_cast<std::uint64_t>(quadrant));
    const int choice = static_cast<int>(child.key & 3u);  // exact uniform on {0..3}
    const std::uint64_t qx = static_cast<std::uint64_t>(quadrant & 1);
    const std::uint64_t qy = static_cast<std::uint64_t>((quadrant >> 1) & 1);
    const std::uint64_t cx = static_cast<std::uint64_t>(choice & 1);
    const std::uint64_t cy = static_cast<std::uint64_t>((choice >> 1) & 1);
    // quadrant spans 2 child units, chosen cell 1 unit
    child.units_x = 4 * parent.units_x + 2 * qx + cx;
    child.units_y = 4 * parent.units_y + 2 * qy + cy;
    child.level = parent.level + 1;
    const double side = std::ldexp(1.0, -2 * child.level);
    child.cell = {static_cast<double>(child.units_x) * side,
                  static_cast<double>(child.units_y) * side, side};
    return child;
}

void for_each_atom(const ModelId& model, int n,
                   const std::function<void(const WeightedPoint&)>& fn) {
    require_level(n);
    if (model.kind == ModelKind::sierpinski) {
        const double mass = 1.0 / static_cast<double>(pow_u64(3, n));
        for_each_triangle(n, [&](const Triangle& t) {
            fn({(t.x0 + t.x1 + t.x2) / 3.0, (t.y0 + t.y1 + t.y2) / 3.0, mass});
        });
    } else {
        const double mass = std::ldexp(1.0, -2 * n);
        for_each_square(model, n, [&](const Square& s) {
            fn({s.x + 0.5 * s.side, s.y + 0.5 * s.side, mass});
        });
    }
}

std::vector<WeightedPoint> natural_measure_atoms(const ModelId& model, int n,
                                                 const Limits& limits) {
    check_cell_budget(model, n, limits);
    std::vector<WeightedPoint> out;
    out.reserve(cell_count(model, n));
    for_each_atom(model, n, [&](const WeightedPoint& a) { out.push_back(a); });
    return out;
}

AxisDeltas axis_difference_words(int n) {
    require_level(n);
    AxisDeltas words;
    const std::uint64_t total = pow_u64(3, n);
    words.delta_int.reserve(total);
    words.count.reserve(total);
    // iterative base-3 enumeration; digit 0 -> delta -3, 1 -> 0, 2 -> +3
    std::vector<int> digits(static_cast<std::size_t>(std::max(n, 1)), 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::int64_t v = 0;
        std::uint32_t c = 1;
        std::uint64_t rest = idx;
        for (int j = 0; j < n; ++j) digits[j] = 0;
        for (int j = n - 1; j >= 0; --j) {
            digits[j] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        for (int j = 0; j < n; ++j) {
            v = 4 * v + 3 * (digits[j] - 1);
            if (digits[j] == 1) c *= 2;
        }
        words.delta_int.push_back(v);
        words.count.push_back(c);
    }
    return words;
}

void for_each_difference_class(const ModelId& model, int n,
                               const std::function<void(const DifferenceClass&)>& fn,
                               const Limits& limits) {
    if (model.kind != ModelKind::four_corner)
        throw wrong_model_error("difference classes exist for the four-corner model only");
    if (n > limits.max_class_level)
        throw budget_error("difference classes at level " + std::to_string(n) +
                           " exceed the class budget (max " +
                           std::to_string(limits.max_class_level) + ")");
    const AxisDeltas words = axis_difference_words(n);
    const double s4 = std::ldexp(1.0, -2 * n);
    const std::size_t m = words.delta_int.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = static_cast<double>(words.delta_int[i]) * s4;
        for (std::size_t j = 0; j < m; ++j) {
            fn({dx, static_cast<double>(words.delta_int[j]) * s4,
                static_cast<std::uint64_t>(words.count[i]) * words.count[j]});
        }
    }
}

}  // namespace favlab
