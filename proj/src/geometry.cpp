#include "favlab/geometry.hpp"

#include <algorithm>
#include <stdexcept>

#include "favlab/numeric.hpp"

namespace favlab {

namespace {

void check_intervals(const std::vector<Interval>& intervals) {
    for (const Interval& iv : intervals) {
        if (!iv.valid()) throw std::invalid_argument("interval with lo > hi");
    }
}

}  // namespace

double union_length(std::vector<Interval> intervals) {
    if (intervals.empty()) return 0.0;
    check_intervals(intervals);
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) {
                  return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
              });
    KahanSum total;
    double run_lo = intervals.front().lo;
    double run_hi = intervals.front().hi;
    for (std::size_t i = 1; i < intervals.size(); ++i) {
        const Interval& iv = intervals[i];
        if (iv.lo <= run_hi) {  // overlapping or abutting: one run
            if (iv.hi > run_hi) run_hi = iv.hi;
        } else {
            total.add(run_hi - run_lo);
            run_lo = iv.lo;
            run_hi = iv.hi;
        }
    }
    total.add(run_hi - run_lo);
    return total.value();
}

StepFunction build_step(std::vector<Interval> intervals) {
    StepFunction f;
    if (intervals.empty()) return f;
    check_intervals(intervals);

    const std::size_t n = intervals.size();
    std::vector<double> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = intervals[i].lo;
        hi[i] = intervals[i].hi;
    }
    intervals.clear();
    intervals.shrink_to_fit();
    std::sort(lo.begin(), lo.end());
    std::sort(hi.begin(), hi.end());

    f.breakpoints.reserve(2 * n);
    f.values.reserve(2 * n);
    std::int64_t count = 0;
    std::size_t i = 0, j = 0;
    while (j < n) {
        const double x = (i < n && lo[i] <= hi[j]) ? lo[i] : hi[j];
        std::int64_t delta = 0;
        while (i < n && lo[i] == x) {
            ++delta;
            ++i;
        }
        while (j < n && hi[j] == x) {
            --delta;
            ++j;
        }
        if (delta != 0) {
            if (!f.breakpoints.empty())
                f.values.push_back(static_cast<std::int32_t>(count));
            f.breakpoints.push_back(x);
            count += delta;
        }
    }
    // count returned to zero at the last breakpoint
    return f;
}

std::int32_t StepFunction::value_at(double x) const {
    if (breakpoints.empty() || x < breakpoints.front() || x > breakpoints.back())
        return 0;
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    const std::size_t gap = static_cast<std::size_t>(it - breakpoints.begin());
    if (it == breakpoints.end()) return values.empty() ? 0 : values.back();
    // exact breakpoint: report the larger adjacent gap value
    if (gap >= 1 && breakpoints[gap - 1] == x) {
        const std::int32_t right = gap - 1 < values.size() ? values[gap - 1] : 0;
        const std::int32_t left = gap >= 2 ? values[gap - 2] : 0;
        return std::max(left, right);
    }
    return values[gap - 1];
}

double StepFunction::support_length() const {
    KahanSum total;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0) total.add(breakpoints[i + 1] - breakpoints[i]);
    }
    return total.value();
}

std::vector<Interval> StepFunction::support() const {
    std::vector<Interval> out;
    std::size_t i = 0;
    while (i < values.size()) {
        if (values[i] > 0) {
            const double lo = breakpoints[i];
            while (i < values.size() && values[i] > 0) ++i;
            out.push_back({lo, breakpoints[i]});
        } else {
            ++i;
        }
    }
    return out;
}

double StepFunction::moment(int p) const {
    KahanSum total;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0)
            total.add(ipow(static_cast<double>(values[i]), p) *
                      (breakpoints[i + 1] - breakpoints[i]));
    }
    return total.value();
}

}  // namespace favlab
