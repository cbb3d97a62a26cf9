#pragma once

#include "favlab/models.hpp"
#include "favlab/projection.hpp"
#include "favlab/quadrature.hpp"

namespace favlab {

// Infinite line {z : p_phi(z) = offset}; phi is the normal direction.
struct NeedleLine {
    Direction dir;
    double offset = 0.0;
};

struct FavardResult {
    ModelId model;
    int n = 0;
    double value = 0.0;           // (1/pi) * integral of the support length
    double error_estimate = 0.0;
    std::int64_t node_count = 0;
    bool converged = true;
};

struct MonteCarloResult {
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double estimate = 0.0;         // hits / trials
    double std_error = 0.0;        // sqrt(p(1-p)/trials)
    double favard_estimate = 0.0;  // 2*sqrt2 * estimate
    std::uint64_t seed = 0;
};

struct MedianResult {
    ModelId model;
    int n = 0;
    double median = 0.0;
    std::uint64_t sample_count = 0;
    double reciprocal_integral = 0.0;  // grid quadrature of 1/support_length
};

struct SectorResult {
    QuadratureResult integral;
    double theta_lo = 0.0;  // relative to the 0X axis
    double theta_hi = 0.0;
    bool beyond_validity = false;  // j past log4(n) + slack
};

FavardResult favard(const ModelId& model, int n, const QuadratureSpec& spec,
                    unsigned threads = 1, const Limits& limits = {});

// Integral of the support length over the absolute directions in the sector
// J_j = [c1*4^-j, c2*4^-j] of angles measured from the 0X axis (relative
// angles clamped to [0, pi)). A zero-width sector integrates to 0; a sector
// emptied by inversion or clamping throws empty_sector_error.
SectorResult sector_integral(const ModelId& model, int n, int j, double c1,
                             double c2, const QuadratureSpec& spec,
                             unsigned threads = 1, const Limits& limits = {});

// True iff the line meets some level-n cell (closed-interval convention).
// Digit-tree descent pruning every ancestor whose projection misses the
// offset; children lie inside their parent, so pruning is exact.
bool needle_hit(const ModelId& model, int n, const NeedleLine& line);

// Buffon throw experiment: direction uniform on [0, pi), offset uniform on
// the length-2*sqrt2 window centered on the projection of (1/2, 1/2).
// Counter-based per-trial seeding; results independent of thread scheduling.
MonteCarloResult buffon_estimate(const ModelId& model, int n,
                                 std::uint64_t trials, std::uint64_t seed,
                                 unsigned threads = 1);

// Median and reciprocal integral of the support length over a uniform
// midpoint grid of directions on [0, pi). Projections of these nonempty
// compact sets have positive length at every angle, so 1/support is finite.
MedianResult median_support(const ModelId& model, int n, int grid_size,
                            unsigned threads = 1, const Limits& limits = {});

}  // namespace favlab
