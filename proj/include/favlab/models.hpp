#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace favlab {

enum class ModelKind { four_corner, sierpinski, random_four_corner };

struct ModelId {
    ModelKind kind = ModelKind::four_corner;
    std::uint64_t seed = 0;  // used by random_four_corner only
};

std::string model_name(const ModelId& model);
ModelId parse_model(const std::string& name, std::uint64_t seed = 0);

// Axis-aligned square cell, corner = lower-left. For model cells the corner
// coordinates and side are exact dyadic rationals (n <= 26).
struct Square {
    double x = 0.0;
    double y = 0.0;
    double side = 1.0;
};

// Upward equilateral triangle cell; (x0,y0)-(x1,y1) is the horizontal base.
struct Triangle {
    double x0, y0, x1, y1, x2, y2;
};

// Base-4 digit address of one level-n cell of the four-corner model. The
// packed word has 2 bits per level, most significant level first; digit d
// encodes (a, b) = (3*(d>>1), 3*(d&1)). Reading the word as a base-4 integer
// orders the squares by their 0X-axis projection.
struct SquareAddress {
    int level = 0;
    std::uint64_t word = 0;  // 2*level low bits used

    [[nodiscard]] int digit(int j) const {  // j in [0, level)
        return static_cast<int>((word >> (2 * (level - 1 - j))) & 3u);
    }
    [[nodiscard]] Square cell() const;
    // Corner in integer units of 4^-level.
    [[nodiscard]] std::uint64_t corner_units_x() const;
    [[nodiscard]] std::uint64_t corner_units_y() const;
};

// Exact-budget limits shared by the engines.
struct Limits {
    std::uint64_t max_cells = 16777216;  // 4^12
    int max_class_level = 7;             // 9^n difference classes
    int max_bucket_level = 8;
    int max_direct_pair_cells = 16384;   // O(N^2) fallbacks
};

std::uint64_t cell_count(const ModelId& model, int n);
void check_cell_budget(const ModelId& model, int n, const Limits& limits);

// Streaming enumeration in lexicographic digit order. Throws
// wrong_model_error when asked for squares of the sierpinski model (use
// for_each_triangle) and vice versa.
void for_each_square(const ModelId& model, int n,
                     const std::function<void(const Square&)>& fn);
void for_each_triangle(int n, const std::function<void(const Triangle&)>& fn);

std::vector<Square> enumerate_squares(const ModelId& model, int n,
                                      const Limits& limits = {});
std::vector<Triangle> enumerate_triangles(int n, const Limits& limits = {});
void for_each_address(int n, const std::function<void(const SquareAddress&)>& fn);

// Triangle of the level-n mesh from its integer lattice position; q is even,
// m = p + q/2 in [0, 3^n) is the base-projection slot.
Triangle make_triangle(int n, std::int64_t p, std::int64_t q);

// Random model: one cell chosen per quadrant per generation. Nodes carry a
// splittable key so lazy descent and full enumeration agree for a seed.
struct RandomNode {
    Square cell;
    std::uint64_t key = 0;
    // Corner in integer units of cell.side.
    std::uint64_t units_x = 0;
    std::uint64_t units_y = 0;
    int level = 0;
};
RandomNode random_root(std::uint64_t seed);
RandomNode random_child(const RandomNode& parent, int quadrant);

// Atom of the natural measure: cell center (square) or centroid (triangle),
// mass 4^-n or 3^-n.
struct WeightedPoint {
    double x = 0.0;
    double y = 0.0;
    double mass = 0.0;
};
void for_each_atom(const ModelId& model, int n,
                   const std::function<void(const WeightedPoint&)>& fn);
std::vector<WeightedPoint> natural_measure_atoms(const ModelId& model, int n,
                                                 const Limits& limits = {});

// Translation class of ordered square pairs, keyed by the center difference.
// Per-axis digit differences lie in {-3,0,3}; a zero digit contributes factor
// 2 to the count, a nonzero digit factor 1. Classes cover all 16^n ordered
// pairs (the zero class holds the 4^n diagonal pairs).
struct DifferenceClass {
    double dx = 0.0;  // planar center difference
    double dy = 0.0;
    std::uint64_t ordered_pair_count = 0;
};

// Per-axis difference words for level n: 3^n entries. delta_int is the delta
// in integer units of 4^-n (a multiple of 3), count the per-axis multiplicity.
struct AxisDeltas {
    std::vector<std::int64_t> delta_int;
    std::vector<std::uint32_t> count;
};
AxisDeltas axis_difference_words(int n);

void for_each_difference_class(const ModelId& model, int n,
                               const std::function<void(const DifferenceClass&)>& fn,
                               const Limits& limits = {});

}  // namespace favlab
