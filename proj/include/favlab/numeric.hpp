#pragma once

#include <cmath>
#include <cstdint>

namespace favlab {

// Compensated (Kahan/Neumaier) accumulator. Every length/moment/measure
// accumulation in the project goes through this so that totals reproduce
// across summation orders to ~1e-15 relative.
class KahanSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Exact powers of 4 as doubles (|e| <= 500).
inline double pow4(int e) { return std::ldexp(1.0, 2 * e); }

// floor(log_4 x) for x > 0. log2 of an exact power of four is exact, so the
// floor convention is stable at the lattice points produced by the models.
inline int floor_log4(double x) {
    return static_cast<int>(std::floor(0.5 * std::log2(x)));
}

inline double ipow(double v, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= v;
    return r;
}

inline constexpr double kSqrt5 = 2.23606797749978969640917366873;
inline constexpr double kInvSqrt5 = 0.44721359549995793928183473374;

}  // namespace favlab
