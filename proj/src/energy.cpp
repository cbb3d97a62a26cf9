#include "favlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "favlab/errors.hpp"
#include "favlab/numeric.hpp"
#include "favlab/parallel.hpp"

namespace favlab {

double EnergyResult::per_scale_total() const {
    KahanSum s;
    for (const auto& [bin, v] : per_scale) s.add(v);
    return s.value();
}

namespace {

// bins are floor(log4 1/d); for these models d ranges over (~4^-n, sqrt2), so
// bins live in [-1, n-1]
struct ScaleBins {
    explicit ScaleBins(int n) : offset(2), sums(n + 4), counts(n + 4, 0) {}
    int offset;
    std::vector<KahanSum> sums;
    std::vector<std::uint64_t> counts;

    void add(int bin, double v, std::uint64_t c) {
        const int idx = bin + offset;
        if (idx < 0 || idx >= static_cast<int>(sums.size()))
            throw std::logic_error("distance bin outside expected range");
        sums[static_cast<std::size_t>(idx)].add(v);
        counts[static_cast<std::size_t>(idx)] += c;
    }
};

EnergyResult energy_four_corner(const ModelId& model, int n, unsigned threads,
                                const Limits& limits) {
    if (n > limits.max_class_level)
        throw budget_error("riesz energy at level " + std::to_string(n) +
                           " exceeds the class budget (max " +
                           std::to_string(limits.max_class_level) + ")");
    const AxisDeltas words = axis_difference_words(n);
    const std::size_t m = words.delta_int.size();
    const double unit = pow4(-n);
    const double mass2 = pow4(-2 * n);

    const std::size_t chunk_words = 32;
    const std::size_t n_chunks = (m + chunk_words - 1) / chunk_words;
    std::vector<ScaleBins> outs(n_chunks, ScaleBins(n));

    run_chunks(n_chunks, threads, [&](std::size_t c) {
        ScaleBins bins(n);
        const std::size_t begin = c * chunk_words;
        const std::size_t end = std::min(m, begin + chunk_words);
        for (std::size_t i = begin; i < end; ++i) {
            const double dx = static_cast<double>(words.delta_int[i]) * unit;
            const std::uint64_t ci = words.count[i];
            for (std::size_t jw = 0; jw < m; ++jw) {
                if (words.delta_int[i] == 0 && words.delta_int[jw] == 0)
                    continue;  // self-pairs excluded
                const double dy = static_cast<double>(words.delta_int[jw]) * unit;
                const double dist = std::sqrt(dx * dx + dy * dy);
                const std::uint64_t count = ci * words.count[jw];
                bins.add(floor_log4(1.0 / dist),
                         static_cast<double>(count) / dist, count);
            }
        }
        outs[c] = std::move(bins);
    });

    EnergyResult out;
    out.model = model;
    out.n = n;
    ScaleBins merged(n);
    for (const ScaleBins& bins : outs) {
        for (std::size_t idx = 0; idx < bins.sums.size(); ++idx) {
            merged.sums[idx].add(bins.sums[idx].value());
            merged.counts[idx] += bins.counts[idx];
        }
    }
    KahanSum energy;
    for (std::size_t idx = 0; idx < merged.sums.size(); ++idx) {
        const double v = merged.sums[idx].value() * mass2;
        if (merged.counts[idx] == 0) continue;
        const int bin = static_cast<int>(idx) - merged.offset;
        out.per_scale[bin] = v;
        out.pair_counts_per_scale[bin] = merged.counts[idx];
        energy.add(v);
    }
    out.energy = energy.value();
    return out;
}

EnergyResult energy_direct(const ModelId& model, int n, unsigned threads,
                           const Limits& limits) {
    const std::uint64_t cells = cell_count(model, n);
    if (cells > static_cast<std::uint64_t>(limits.max_direct_pair_cells))
        throw budget_error("direct pair energy needs " + std::to_string(cells) +
                           " atoms, budget " +
                           std::to_string(limits.max_direct_pair_cells));
    const std::vector<WeightedPoint> atoms = natural_measure_atoms(model, n, limits);
    const double mass2 = atoms.empty() ? 0.0 : atoms[0].mass * atoms[0].mass;

    const std::size_t chunk_atoms = 64;
    const std::size_t n_chunks = (atoms.size() + chunk_atoms - 1) / chunk_atoms;
    std::vector<ScaleBins> outs(n_chunks, ScaleBins(n));
    run_chunks(n_chunks, threads, [&](std::size_t c) {
        ScaleBins bins(n);
        const std::size_t begin = c * chunk_atoms;
        const std::size_t end = std::min(atoms.size(), begin + chunk_atoms);
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < atoms.size(); ++j) {
                if (i == j) continue;
                const double dx = atoms[i].x - atoms[j].x;
                const double dy = atoms[i].y - atoms[j].y;
                const double dist = std::sqrt(dx * dx + dy * dy);
                bins.add(floor_log4(1.0 / dist), 1.0 / dist, 1);
            }
        }
        outs[c] = std::move(bins);
    });

    EnergyResult out;
    out.model = model;
    out.n = n;
    ScaleBins merged(n);
    for (const ScaleBins& bins : outs) {
        for (std::size_t idx = 0; idx < bins.sums.size(); ++idx) {
            merged.sums[idx].add(bins.sums[idx].value());
            merged.counts[idx] += bins.counts[idx];
        }
    }
    KahanSum energy;
    for (std::size_t idx = 0; idx < merged.sums.size(); ++idx) {
        if (merged.counts[idx] == 0) continue;
        const double v = merged.sums[idx].value() * mass2;
        const int bin = static_cast<int>(idx) - merged.offset;
        out.per_scale[bin] = v;
        out.pair_counts_per_scale[bin] = merged.counts[idx];
        energy.add(v);
    }
    out.energy = energy.value();
    return out;
}

}  // namespace

EnergyResult riesz_energy(const ModelId& model, int n, unsigned threads,
                          const Limits& limits) {
    if (model.kind == ModelKind::four_corner)
        return energy_four_corner(model, n, threads, limits);
    return energy_direct(model, n, threads, limits);
}

QuadratureResult ball_average(const ModelId& model, int n, double epsilon,
                              const QuadratureSpec& spec, unsigned threads,
                              const Limits& limits) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    const std::uint64_t cells = cell_count(model, n);
    if (cells > static_cast<std::uint64_t>(limits.max_direct_pair_cells))
        throw budget_error("ball average needs " + std::to_string(cells) +
                           " atoms, budget " +
                           std::to_string(limits.max_direct_pair_cells));
    const std::vector<WeightedPoint> atoms = natural_measure_atoms(model, n, limits);
    const double mass2 = atoms.empty() ? 0.0 : atoms[0].mass * atoms[0].mass;

    return integrate_theta(
        [&](double theta) {
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            std::vector<double> proj(atoms.size());
            for (std::size_t i = 0; i < atoms.size(); ++i)
                proj[i] = atoms[i].x * c + atoms[i].y * s;
            std::sort(proj.begin(), proj.end());
            // ordered pairs (self included) within epsilon: sliding window
            std::uint64_t pairs = 0;
            std::size_t lo = 0, hi = 0;
            for (std::size_t i = 0; i < proj.size(); ++i) {
                while (proj[i] - proj[lo] > epsilon) ++lo;
                if (hi < i) hi = i;
                while (hi + 1 < proj.size() && proj[hi + 1] - proj[i] <= epsilon)
                    ++hi;
                pairs += hi - lo + 1;
            }
            return static_cast<double>(pairs) * mass2;
        },
        0.0, M_PI, spec, threads);
}

}  // namespace favlab
