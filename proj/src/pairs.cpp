#include "favlab/pairs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "favlab/errors.hpp"
#include "favlab/parallel.hpp"
#include "favlab/rng.hpp"

namespace favlab {

double AxisFrame::phi_star() { return std::atan2(1.0, 2.0); }

std::string AxisPoint::sigma_word() const {
    std::string w;
    w.reserve(static_cast<std::size_t>(level));
    for (int j = 0; j < level; ++j)
        w.push_back(static_cast<char>('0' + sigma_digit(j)));
    return w;
}

AxisPoint axis_coordinates(const SquareAddress& address) {
    // The packed address word read as a base-4 integer IS the sigma word:
    // digit (a, b) -> (2a + b)/3 = (a_bit << 1) | b_bit.
    AxisPoint p;
    p.level = address.level;
    p.sigma = address.word;
    const std::int64_t m = static_cast<std::int64_t>(address.word);
    const std::int64_t ax = static_cast<std::int64_t>(address.corner_units_x());
    const std::int64_t ay = static_cast<std::int64_t>(address.corner_units_y());
    p.s_int = 3 * (2 * m + 1);
    p.y_int = 4 * ay - 2 * ax + 1;
    // exact integer * power of two, then a single 1/sqrt5 rounding
    const double half_unit = std::ldexp(1.0, -2 * address.level - 1);
    p.s = static_cast<double>(p.s_int) * half_unit * kInvSqrt5;
    p.y = static_cast<double>(p.y_int) * half_unit * kInvSqrt5;
    return p;
}

int common_prefix_length(const AxisPoint& a, const AxisPoint& b) {
    if (a.level != b.level)
        throw std::invalid_argument("axis points of different levels");
    const std::uint64_t diff = a.sigma ^ b.sigma;
    if (a.level == 0 || diff == 0) return a.level;
    const int width = 2 * a.level;
    const std::uint64_t shifted = diff << (64 - width);
    return std::countl_zero(shifted) / 2;
}

double four_adic_distance(const AxisPoint& a, const AxisPoint& b) {
    return AxisFrame::length() * pow4(-common_prefix_length(a, b));
}

PairBucket classify_deltas(double abs_ds, double abs_dy) {
    const int j = std::max(0, floor_log4(abs_dy / abs_ds));
    const int k_plus_j = floor_log4(1.0 / abs_ds);
    return {j, k_plus_j - j};
}

namespace {

// Shared delta classification from exact integer deltas in units of
// 4^-n / 2. Both the all-pairs and the difference-class routes reduce to the
// same integers, so their bucket decisions agree bit for bit.
PairBucket classify_units(std::int64_t ds_units, std::int64_t dy_units,
                          double half_unit) {
    const double ds =
        static_cast<double>(std::abs(ds_units)) * half_unit * kInvSqrt5;
    const double dy =
        static_cast<double>(std::abs(dy_units)) * half_unit * kInvSqrt5;
    return classify_deltas(ds, dy);
}

}  // namespace

PairBucket classify_pair(const AxisPoint& a, const AxisPoint& b) {
    if (a.level == b.level && a.sigma == b.sigma)
        throw degenerate_pair_error("classify_pair on identical squares");
    const double half_unit = std::ldexp(1.0, -2 * a.level - 1);
    return classify_units(a.s_int - b.s_int, a.y_int - b.y_int, half_unit);
}

std::uint64_t BucketTable::total() const {
    std::uint64_t t = 0;
    for (const auto& [bucket, count] : counts) t += count;
    return t;
}

double BucketTable::bound_ratio(int j, int k) const {
    const auto it = counts.find({j, k});
    if (it == counts.end()) return 0.0;
    return static_cast<double>(it->second) / pow4(2 * n - k - 2 * j);
}

double BucketTable::max_bound_ratio() const {
    double best = 0.0;
    for (const auto& [bucket, count] : counts)
        best = std::max(best, bound_ratio(bucket.first, bucket.second));
    return best;
}

BucketTable count_buckets(int n, unsigned threads, const Limits& limits) {
    if (n > limits.max_bucket_level)
        throw budget_error("bucket census at level " + std::to_string(n) +
                           " exceeds the budget (max " +
                           std::to_string(limits.max_bucket_level) + ")");
    BucketTable table;
    table.n = n;
    if (n == 0) return table;  // a single square has no distinct pairs

    const AxisDeltas words = axis_difference_words(n);
    const std::size_t m = words.delta_int.size();
    const double half_unit = std::ldexp(1.0, -2 * n - 1);

    // flat (j, k+j) histogram per chunk, merged in chunk order
    const int span = n + 6;           // k+j in [-2, n+3]
    const int kpj_offset = 2;
    const std::size_t flat_size = static_cast<std::size_t>(n + 1) * span;
    const std::size_t chunk_words = 32;
    const std::size_t n_chunks = (m + chunk_words - 1) / chunk_words;
    std::vector<std::vector<std::uint64_t>> chunk_hist(n_chunks);

    run_chunks(n_chunks, threads, [&](std::size_t c) {
        std::vector<std::uint64_t> hist(flat_size, 0);
        const std::size_t begin = c * chunk_words;
        const std::size_t end = std::min(m, begin + chunk_words);
        for (std::size_t i = begin; i < end; ++i) {
            const std::int64_t dx = words.delta_int[i];
            const std::uint64_t ci = words.count[i];
            for (std::size_t jw = 0; jw < m; ++jw) {
                const std::int64_t dy = words.delta_int[jw];
                const std::int64_t ds_units = 2 * (2 * dx + dy);
                if (ds_units == 0) continue;  // the diagonal class
                const std::int64_t dy_units = 2 * (2 * dy - dx);
                const PairBucket b = classify_units(ds_units, dy_units, half_unit);
                const int idx = b.j * span + (b.k + b.j + kpj_offset);
                if (b.j < 0 || b.j > n || idx < 0 ||
                    idx >= static_cast<int>(flat_size))
                    throw std::logic_error("bucket outside expected range");
                hist[static_cast<std::size_t>(idx)] += ci * words.count[jw];
            }
        }
        chunk_hist[c] = std::move(hist);
    });

    for (const auto& hist : chunk_hist) {
        for (std::size_t idx = 0; idx < hist.size(); ++idx) {
            if (hist[idx] == 0) continue;
            const int j = static_cast<int>(idx) / span;
            const int kpj = static_cast<int>(idx) % span - kpj_offset;
            table.counts[{j, kpj - j}] += hist[idx];
        }
    }
    return table;
}

QuadratureResult pair_overlap(double dx, double dy, int n,
                              const QuadratureSpec& spec) {
    const double side = pow4(-n);
    return integrate_theta(
        [=](double theta) {
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            const double width = side * (std::abs(c) + std::abs(s));
            return std::max(0.0, width - std::abs(dx * c + dy * s));
        },
        0.0, M_PI, spec, 1);
}

QuadratureResult pair_overlap(const SquareAddress& a, const SquareAddress& b,
                              const QuadratureSpec& spec) {
    if (a.level != b.level)
        throw std::invalid_argument("pair_overlap needs same-level squares");
    const double unit = std::ldexp(1.0, -2 * a.level);
    const double dx = (static_cast<double>(a.corner_units_x()) -
                       static_cast<double>(b.corner_units_x())) *
                      unit;
    const double dy = (static_cast<double>(a.corner_units_y()) -
                       static_cast<double>(b.corner_units_y())) *
                      unit;
    return pair_overlap(dx, dy, a.level, spec);
}

double OverlapTable::per_j_sum(int j) const {
    KahanSum s;
    for (const auto& [bucket, v] : bucket_sums)
        if (bucket.first == j) s.add(v);
    return s.value();
}

std::vector<int> OverlapTable::occupied_j() const {
    std::vector<int> js;
    for (const auto& [bucket, v] : bucket_sums)
        if (js.empty() || js.back() != bucket.first) js.push_back(bucket.first);
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    return js;
}

namespace {

struct OverlapLevel {
    double total = 0.0;
    double diagonal = 0.0;
    std::map<std::pair<int, int>, double> buckets;
};

OverlapLevel eval_overlap_level(int n, const AxisDeltas& words, int panels,
                                int nodes, unsigned threads) {
    const ThetaGrid grid = theta_grid(0.0, M_PI, panels, nodes);
    const std::size_t n_nodes = grid.theta.size();
    const double side = pow4(-n);
    std::vector<double> ct(n_nodes), st(n_nodes), width(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        ct[i] = std::cos(grid.theta[i]);
        st[i] = std::sin(grid.theta[i]);
        width[i] = side * (std::abs(ct[i]) + std::abs(st[i]));
    }

    const std::size_t m = words.delta_int.size();
    const double unit = pow4(-n);
    const double half_unit = 0.5 * unit;
    const int span = n + 6;
    const int kpj_offset = 2;
    const std::size_t flat_size = static_cast<std::size_t>(n + 1) * span;

    struct ChunkOut {
        double total = 0.0;
        double diagonal = 0.0;
        std::vector<double> buckets;
    };
    const std::size_t chunk_words = 8;
    const std::size_t n_chunks = (m + chunk_words - 1) / chunk_words;
    std::vector<ChunkOut> outs(n_chunks);

    run_chunks(n_chunks, threads, [&](std::size_t c) {
        ChunkOut out;
        out.buckets.assign(flat_size, 0.0);
        KahanSum total;
        KahanSum diagonal;
        const std::size_t begin = c * chunk_words;
        const std::size_t end = std::min(m, begin + chunk_words);
        const double* tw = grid.weight.data();
        for (std::size_t i = begin; i < end; ++i) {
            const double dx = static_cast<double>(words.delta_int[i]) * unit;
            const std::uint64_t ci = words.count[i];
            for (std::size_t jw = 0; jw < m; ++jw) {
                const double dy = static_cast<double>(words.delta_int[jw]) * unit;
                double acc = 0.0;
                for (std::size_t t = 0; t < n_nodes; ++t) {
                    const double sep = std::abs(dx * ct[t] + dy * st[t]);
                    acc += tw[t] * std::max(0.0, width[t] - sep);
                }
                const double weighted =
                    static_cast<double>(ci * words.count[jw]) * acc;
                const std::int64_t ds_units =
                    2 * (2 * words.delta_int[i] + words.delta_int[jw]);
                if (ds_units == 0) {
                    diagonal.add(weighted);
                    total.add(weighted);
                    continue;
                }
                const std::int64_t dy_units =
                    2 * (2 * words.delta_int[jw] - words.delta_int[i]);
                const PairBucket b = classify_units(ds_units, dy_units, half_unit);
                out.buckets[static_cast<std::size_t>(b.j * span + b.k + b.j +
                                                     kpj_offset)] += weighted;
                total.add(weighted);
            }
        }
        out.total = total.value();
        out.diagonal = diagonal.value();
        outs[c] = std::move(out);
    });

    OverlapLevel level;
    KahanSum total, diagonal;
    std::vector<KahanSum> buckets(flat_size);
    for (const ChunkOut& out : outs) {
        total.add(out.total);
        diagonal.add(out.diagonal);
        for (std::size_t idx = 0; idx < flat_size; ++idx)
            if (out.buckets[idx] != 0.0) buckets[idx].add(out.buckets[idx]);
    }
    level.total = total.value();
    level.diagonal = diagonal.value();
    for (std::size_t idx = 0; idx < flat_size; ++idx) {
        const double v = buckets[idx].value();
        if (v != 0.0) {
            const int j = static_cast<int>(idx) / span;
            const int kpj = static_cast<int>(idx) % span - kpj_offset;
            level.buckets[{j, kpj - j}] = v;
        }
    }
    return level;
}

}  // namespace

OverlapTable total_overlap(int n, const QuadratureSpec& spec, unsigned threads,
                           const Limits& limits) {
    if (!spec.valid()) throw std::invalid_argument("invalid quadrature spec");
    if (n > limits.max_class_level)
        throw budget_error("overlap sum at level " + std::to_string(n) +
                           " exceeds the class budget (max " +
                           std::to_string(limits.max_class_level) + ")");
    const AxisDeltas words = axis_difference_words(n);

    OverlapTable table;
    table.n = n;

    // Same ladder shape as integrate_theta so both bookkeeping routes
    // integrate over identical theta grids.
    int panels = spec.panel_count;
    OverlapLevel level = eval_overlap_level(n, words, panels, spec.nodes_per_panel,
                                            threads);
    std::int64_t evals = static_cast<std::int64_t>(panels) * spec.nodes_per_panel;
    double previous = level.total;
    bool converged = false;
    double error = std::abs(previous);
    for (int r = 0; r < spec.max_refinements; ++r) {
        panels *= 2;
        level = eval_overlap_level(n, words, panels, spec.nodes_per_panel, threads);
        evals += static_cast<std::int64_t>(panels) * spec.nodes_per_panel;
        error = std::abs(level.total - previous);
        if (ladder_converged(previous, level.total, spec.refinement_tolerance)) {
            converged = true;
            break;
        }
        previous = level.total;
    }

    table.total = level.total;
    table.diagonal = level.diagonal;
    table.bucket_sums = std::move(level.buckets);
    table.quality = {level.total, error, converged, panels, evals};
    return table;
}

ViolationReport sector_pair_check(int n, int j, const SectorSpec& sector,
                                  int sample_count, std::uint64_t seed,
                                  unsigned threads, const Limits& limits) {
    ViolationReport report;
    report.n = n;
    report.j = j;
    check_cell_budget({ModelKind::four_corner, 0}, n, limits);

    // Relative angles measured from the 0X axis, clamped to (0, pi/2]: past
    // pi/2 the direction wraps toward the axis from the far side, where the
    // sector geometry no longer applies.
    const double lo = sector.c1 * pow4(-j);
    const double hi = std::min(sector.c2 * pow4(-j), 0.5 * M_PI);
    if (!(lo < hi)) return report;
    report.sampled_thetas = static_cast<std::uint64_t>(sample_count);

    const std::uint64_t count = cell_count({ModelKind::four_corner, 0}, n);
    std::vector<AxisPoint> points;
    points.reserve(count);
    for_each_address(n, [&](const SquareAddress& a) {
        points.push_back(axis_coordinates(a));
    });
    std::vector<Square> cells;
    cells.reserve(count);
    for_each_square({ModelKind::four_corner, 0}, n,
                    [&](const Square& s) { cells.push_back(s); });
    const double half_unit = std::ldexp(1.0, -2 * n - 1);
    const double phi_star = AxisFrame::phi_star();

    struct SampleOut {
        std::uint64_t overlaps = 0;
        std::vector<Violation> violations;
    };
    std::vector<SampleOut> outs(static_cast<std::size_t>(sample_count));

    run_chunks(static_cast<std::size_t>(sample_count), threads, [&](std::size_t t) {
        const double theta =
            lo + (hi - lo) * unit_double(stream_draw(seed, t));
        const Direction dir = Direction::from_angle(phi_star + theta);
        std::vector<std::pair<double, std::uint32_t>> by_lo(points.size());
        std::vector<double> his(points.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const Interval iv = project_square(cells[i], dir);
            by_lo[i] = {iv.lo, static_cast<std::uint32_t>(i)};
            his[i] = iv.hi;
        }
        std::sort(by_lo.begin(), by_lo.end());

        SampleOut out;
        using HeapItem = std::pair<double, std::uint32_t>;  // (hi, index)
        std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> active;
        for (const auto& [lo_i, idx] : by_lo) {
            while (!active.empty() && active.top().first <= lo_i) active.pop();
            if (!active.empty()) {
                // every active interval overlaps this one with positive length
                std::vector<HeapItem> stash;
                stash.reserve(active.size());
                while (!active.empty()) {
                    stash.push_back(active.top());
                    active.pop();
                }
                for (const HeapItem& item : stash) {
                    const std::uint32_t other = item.second;
                    out.overlaps += 1;
                    const PairBucket b =
                        classify_units(points[idx].s_int - points[other].s_int,
                                       points[idx].y_int - points[other].y_int,
                                       half_unit);
                    if (std::abs(b.j - j) > sector.slack) {
                        Violation v;
                        v.theta = theta;
                        v.sigma1 = points[idx].sigma_word();
                        v.sigma2 = points[other].sigma_word();
                        v.j_expected = j;
                        v.j_actual = b.j;
                        v.ds = std::abs(points[idx].s - points[other].s);
                        v.dy = std::abs(points[idx].y - points[other].y);
                        out.violations.push_back(std::move(v));
                    }
                    active.push(item);
                }
            }
            active.push({his[idx], idx});
        }
        outs[t] = std::move(out);
    });

    for (SampleOut& out : outs) {
        report.overlapping_pairs += out.overlaps;
        for (Violation& v : out.violations)
            report.violations.push_back(std::move(v));
    }
    return report;
}

}  // namespace favlab
