#pragma once

#include <map>

#include "favlab/models.hpp"
#include "favlab/quadrature.hpp"

namespace favlab {

struct EnergyResult {
    ModelId model;
    int n = 0;
    double energy = 0.0;                 // sum over ordered distinct atom pairs of mass^2/|z-zeta|
    std::map<int, double> per_scale;     // k -> contribution of pairs with floor(log4 1/d) = k
    std::map<int, std::uint64_t> pair_counts_per_scale;

    [[nodiscard]] double per_scale_total() const;
};

// Discrete Riesz 1-energy of the natural atomic measure (self-pairs excluded).
// four_corner runs over difference classes (O(9^n)); sierpinski and random
// over direct pairs with the cell count capped.
EnergyResult riesz_energy(const ModelId& model, int n, unsigned threads = 1,
                          const Limits& limits = {});

// integral over theta of sum over ordered atom pairs (self included) with
// |p_theta(z) - p_theta(zeta)| <= epsilon of mass^2, by theta quadrature.
QuadratureResult ball_average(const ModelId& model, int n, double epsilon,
                              const QuadratureSpec& spec, unsigned threads = 1,
                              const Limits& limits = {});

}  // namespace favlab
