#pragma once

#include "favlab/geometry.hpp"
#include "favlab/models.hpp"
#include "favlab/quadrature.hpp"

namespace favlab {

// Direction of the projection line through the origin. The projection
// functional is p(x, y) = x*cos(phi) + y*sin(phi), phi normalized to [0, pi).
//
// Directions with a small integer direction vector carry the vector along and
// project cells as p = (cx*x + cy*y) * scale. For model cells cx*x + cy*y is
// exact in binary64, so projections that coincide as reals are bit-identical
// doubles and abutting cells abut exactly.
struct Direction {
    double phi = 0.0;
    double ux = 1.0;  // cos(phi)
    double uy = 0.0;  // sin(phi)
    bool exact = false;
    double ex_cx = 0.0;
    double ex_cy = 0.0;
    double ex_scale = 1.0;

    static Direction from_angle(double phi);
    static Direction from_integer_vector(std::int64_t cx, std::int64_t cy);
    // The 0X axis at angle arctan(1/2) from horizontal, direction (2,1)/sqrt5.
    static Direction axis_0x() { return from_integer_vector(2, 1); }
};

Interval project_square(const Square& sq, const Direction& dir);
Interval project_triangle(const Triangle& tr, const Direction& dir);
Interval project_cell_bounds(const ModelId& model, int n, const Direction& dir);

struct ProjectionProfile {
    Direction dir;
    StepFunction multiplicity;
    double support_length = 0.0;
    double first_moment = 0.0;
    double second_moment = 0.0;
};

// Exact multiplicity profile over all level-n cells of the model.
ProjectionProfile profile(const ModelId& model, int n, const Direction& dir,
                          const Limits& limits = {});

// Support length only (no step function materialized).
double support_length(const ModelId& model, int n, const Direction& dir,
                      const Limits& limits = {});

// Exact integral of the squared multiplicity at one direction.
double profile_second_moment(const ModelId& model, int n, const Direction& dir,
                             const Limits& limits = {});

// integral over theta in [a, b] of the squared-multiplicity integral.
QuadratureResult second_moment_theta(const ModelId& model, int n,
                                     const QuadratureSpec& spec,
                                     double a = 0.0, double b = -1.0,
                                     unsigned threads = 1,
                                     const Limits& limits = {});

}  // namespace favlab
