#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "favlab/models.hpp"
#include "favlab/numeric.hpp"
#include "favlab/projection.hpp"
#include "favlab/quadrature.hpp"

namespace favlab {

// The tilted frame: 0X at angle arctan(1/2) from horizontal, 0Y orthogonal.
// p_u(x,y) = (2x + y)/sqrt5, p_uperp(x,y) = (-x + 2y)/sqrt5. The unit square
// projects onto 0X to [0, L], L = 3/sqrt5, and level-k squares project to the
// 4-adic tiling of [0, L].
struct AxisFrame {
    static double length() { return 3.0 * kInvSqrt5; }  // L
    static double phi_star();                            // arctan(1/2)
    static double p_u(double x, double y) { return (2.0 * x + y) * kInvSqrt5; }
    static double p_uperp(double x, double y) { return (2.0 * y - x) * kInvSqrt5; }
};

// 0X/0Y coordinates of a square center. s_int and y_int are the exact
// coordinates in integer units of 4^-n / 2 before the 1/sqrt5 scaling; both
// classifier routes reduce to the same integers, so they agree bit for bit.
struct AxisPoint {
    double s = 0.0;          // 0X coordinate of the center
    double y = 0.0;          // 0Y coordinate
    int level = 0;
    std::uint64_t sigma = 0;  // base-4 word, 2 bits/digit, high digit first
    std::int64_t s_int = 0;   // = 3 * (2*sigma_value + 1)
    std::int64_t y_int = 0;

    [[nodiscard]] int sigma_digit(int j) const {
        return static_cast<int>((sigma >> (2 * (level - 1 - j))) & 3u);
    }
    [[nodiscard]] std::string sigma_word() const;
};

AxisPoint axis_coordinates(const SquareAddress& address);

// Length of the smallest 4-adic interval of [0, L] containing both centers:
// L * 4^-m, m = longest common prefix of the sigma words.
double four_adic_distance(const AxisPoint& a, const AxisPoint& b);
int common_prefix_length(const AxisPoint& a, const AxisPoint& b);

struct PairBucket {
    int j = 0;
    int k = 0;
};

// Floor-of-log4 bucket convention shared by every classifier route:
//   j = max(0, floor(log4(|dy| / |ds|))),  k = floor(log4(1 / |ds|)) - j.
PairBucket classify_deltas(double abs_ds, double abs_dy);
// Throws degenerate_pair_error for identical addresses.
PairBucket classify_pair(const AxisPoint& a, const AxisPoint& b);

struct BucketTable {
    int n = 0;
    std::map<std::pair<int, int>, std::uint64_t> counts;  // (j,k) -> A_{j,k}

    [[nodiscard]] std::uint64_t total() const;
    [[nodiscard]] double bound_ratio(int j, int k) const;  // A/4^(2n-k-2j)
    [[nodiscard]] double max_bound_ratio() const;
};

// Exact bucket counts of all distinct ordered pairs, enumerated over
// difference classes weighted by ordered_pair_count.
BucketTable count_buckets(int n, unsigned threads = 1, const Limits& limits = {});

// Integral over theta in [0, pi] of the overlap length of the projections of
// two side-4^-n squares whose centers differ by (dx, dy).
QuadratureResult pair_overlap(double dx, double dy, int n,
                              const QuadratureSpec& spec);
QuadratureResult pair_overlap(const SquareAddress& a, const SquareAddress& b,
                              const QuadratureSpec& spec);

struct OverlapTable {
    int n = 0;
    double total = 0.0;     // includes the diagonal classes
    double diagonal = 0.0;  // sum over the 4^n coincident pairs (= 4 exactly)
    std::map<std::pair<int, int>, double> bucket_sums;  // distinct pairs only
    QuadratureResult quality;

    [[nodiscard]] double per_j_sum(int j) const;
    [[nodiscard]] std::vector<int> occupied_j() const;
};

// Sum over all difference classes of ordered_pair_count * pair_overlap, with
// per-bucket partial sums. Shares the composite-grid ladder with
// second_moment_theta, so the two routes integrate over identical nodes.
OverlapTable total_overlap(int n, const QuadratureSpec& spec,
                           unsigned threads = 1, const Limits& limits = {});

struct SectorSpec {
    double c1 = 0.25;
    double c2 = 4.0;
    int slack = 1;
};

struct Violation {
    double theta = 0.0;  // angle from the 0X axis
    std::string sigma1, sigma2;
    int j_expected = 0;
    int j_actual = 0;
    double ds = 0.0;
    double dy = 0.0;
};

struct ViolationReport {
    int n = 0;
    int j = 0;
    std::uint64_t sampled_thetas = 0;
    std::uint64_t overlapping_pairs = 0;  // positive-length overlaps seen
    std::vector<Violation> violations;
};

// For sampled angles theta in J_j = [c1*4^-j, min(c2*4^-j, pi/2)] measured
// from the 0X axis, enumerates all distinct pairs whose projections overlap
// with positive length and verifies each classifies within `slack` of j.
// Violations are data, not errors.
ViolationReport sector_pair_check(int n, int j, const SectorSpec& sector,
                                  int sample_count, std::uint64_t seed,
                                  unsigned threads = 1,
                                  const Limits& limits = {});

}  // namespace favlab
