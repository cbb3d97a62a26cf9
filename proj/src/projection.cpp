#include "favlab/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "favlab/errors.hpp"
#include "favlab/numeric.hpp"
#include "favlab/parallel.hpp"

namespace favlab {

Direction Direction::from_angle(double phi) {
    double r = std::fmod(phi, M_PI);
    if (r < 0.0) r += M_PI;
    if (r == M_PI) r = 0.0;
    Direction d;
    d.phi = r;
    d.ux = std::cos(r);
    d.uy = std::sin(r);
    return d;
}

Direction Direction::from_integer_vector(std::int64_t cx, std::int64_t cy) {
    if (cx == 0 && cy == 0)
        throw std::invalid_argument("zero direction vector");
    // normalize the representative so phi lands in [0, pi)
    if (cy < 0 || (cy == 0 && cx < 0)) {
        cx = -cx;
        cy = -cy;
    }
    Direction d;
    d.phi = std::atan2(static_cast<double>(cy), static_cast<double>(cx));
    const double norm = std::hypot(static_cast<double>(cx), static_cast<double>(cy));
    d.exact = true;
    d.ex_cx = static_cast<double>(cx);
    d.ex_cy = static_cast<double>(cy);
    d.ex_scale = 1.0 / norm;
    d.ux = d.ex_cx * d.ex_scale;
    d.uy = d.ex_cy * d.ex_scale;
    return d;
}

Interval project_square(const Square& sq, const Direction& dir) {
    if (dir.exact) {
        const double t0 = dir.ex_cx * sq.x + dir.ex_cy * sq.y;
        const double tx = dir.ex_cx * sq.side;
        const double ty = dir.ex_cy * sq.side;
        const double lo = t0 + std::min(0.0, tx) + std::min(0.0, ty);
        const double hi = t0 + std::max(0.0, tx) + std::max(0.0, ty);
        return {lo * dir.ex_scale, hi * dir.ex_scale};
    }
    const double p0 = sq.x * dir.ux + sq.y * dir.uy;
    const double dx = sq.side * dir.ux;
    const double dy = sq.side * dir.uy;
    return {p0 + std::min(0.0, dx) + std::min(0.0, dy),
            p0 + std::max(0.0, dx) + std::max(0.0, dy)};
}

Interval project_triangle(const Triangle& tr, const Direction& dir) {
    if (dir.exact) {
        const double t0 = dir.ex_cx * tr.x0 + dir.ex_cy * tr.y0;
        const double t1 = dir.ex_cx * tr.x1 + dir.ex_cy * tr.y1;
        const double t2 = dir.ex_cx * tr.x2 + dir.ex_cy * tr.y2;
        return {std::min({t0, t1, t2}) * dir.ex_scale,
                std::max({t0, t1, t2}) * dir.ex_scale};
    }
    const double p0 = tr.x0 * dir.ux + tr.y0 * dir.uy;
    const double p1 = tr.x1 * dir.ux + tr.y1 * dir.uy;
    const double p2 = tr.x2 * dir.ux + tr.y2 * dir.uy;
    return {std::min({p0, p1, p2}), std::max({p0, p1, p2})};
}

Interval project_cell_bounds(const ModelId& model, int n, const Direction& dir) {
    if (model.kind == ModelKind::sierpinski)
        return project_triangle(make_triangle(0, 0, 0), dir);
    (void)n;
    return project_square({0.0, 0.0, 1.0}, dir);
}

namespace {

std::vector<Interval> project_all(const ModelId& model, int n,
                                  const Direction& dir, const Limits& limits) {
    check_cell_budget(model, n, limits);
    std::vector<Interval> intervals;
    intervals.reserve(cell_count(model, n));
    if (model.kind == ModelKind::sierpinski) {
        for_each_triangle(n, [&](const Triangle& t) {
            intervals.push_back(project_triangle(t, dir));
        });
    } else {
        for_each_square(model, n, [&](const Square& s) {
            intervals.push_back(project_square(s, dir));
        });
    }
    return intervals;
}

}  // namespace

ProjectionProfile profile(const ModelId& model, int n, const Direction& dir,
                          const Limits& limits) {
    ProjectionProfile out;
    out.dir = dir;
    {
        std::vector<Interval> intervals = project_all(model, n, dir, limits);
        KahanSum lengths;
        for (const Interval& iv : intervals) lengths.add(iv.length());
        out.first_moment = lengths.value();
        out.multiplicity = build_step(std::move(intervals));
    }
    out.support_length = out.multiplicity.support_length();
    out.second_moment = out.multiplicity.moment(2);
    return out;
}

double support_length(const ModelId& model, int n, const Direction& dir,
                      const Limits& limits) {
    return union_length(project_all(model, n, dir, limits));
}

double profile_second_moment(const ModelId& model, int n, const Direction& dir,
                             const Limits& limits) {
    std::vector<Interval> intervals = project_all(model, n, dir, limits);
    const std::size_t count = intervals.size();
    std::vector<double> lo(count), hi(count);
    for (std::size_t i = 0; i < count; ++i) {
        lo[i] = intervals[i].lo;
        hi[i] = intervals[i].hi;
    }
    intervals.clear();
    intervals.shrink_to_fit();
    std::sort(lo.begin(), lo.end());
    std::sort(hi.begin(), hi.end());
    // merged sweep accumulating count^2 * gap width
    KahanSum total;
    std::int64_t depth = 0;
    double prev = 0.0;
    std::size_t i = 0, j = 0;
    while (j < count) {
        const double x = (i < count && lo[i] <= hi[j]) ? lo[i] : hi[j];
        if (depth > 0 && x > prev)
            total.add(static_cast<double>(depth) * static_cast<double>(depth) *
                      (x - prev));
        while (i < count && lo[i] == x) {
            ++depth;
            ++i;
        }
        while (j < count && hi[j] == x) {
            --depth;
            ++j;
        }
        prev = x;
    }
    return total.value();
}

QuadratureResult second_moment_theta(const ModelId& model, int n,
                                     const QuadratureSpec& spec, double a,
                                     double b, unsigned threads,
                                     const Limits& limits) {
    if (b < a) b = M_PI;  // default range [0, pi]
    check_cell_budget(model, n, limits);
    return integrate_theta(
        [&](double theta) {
            return profile_second_moment(model, n, Direction::from_angle(theta),
                                         limits);
        },
        a, b, spec, threads);
}

}  // namespace favlab
