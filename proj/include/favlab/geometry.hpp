#pragma once

#include <cstdint>
#include <vector>

namespace favlab {

// Closed interval [lo, hi] on the projection line.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] double length() const { return hi - lo; }
    [[nodiscard]] bool valid() const { return lo <= hi; }
};

// Lebesgue measure of a finite union of closed intervals. Abutting intervals
// merge (closed-set convention). Sort-and-sweep with compensated summation.
double union_length(std::vector<Interval> intervals);

// Integer-valued piecewise-constant multiplicity function. Value is 0 outside
// [breakpoints.front(), breakpoints.back()]; values[i] is the multiplicity on
// the open gap (breakpoints[i], breakpoints[i+1]). At a breakpoint value_at
// reports the larger of the two adjacent gap values (closed sets).
struct StepFunction {
    std::vector<double> breakpoints;       // strictly increasing
    std::vector<std::int32_t> values;      // size = breakpoints.size() - 1

    [[nodiscard]] std::int32_t value_at(double x) const;
    [[nodiscard]] double support_length() const;
    [[nodiscard]] std::vector<Interval> support() const;
    // Exact integral of f^p (p >= 1) as sum of value^p * gap width.
    [[nodiscard]] double moment(int p) const;
};

// Multiplicity function of a finite interval family: at every non-breakpoint
// x the value is the number of input intervals containing x.
StepFunction build_step(std::vector<Interval> intervals);

}  // namespace favlab
