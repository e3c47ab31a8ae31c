#include "phaselock/grid.hpp"

#include <cmath>
#include <string>

#include "phaselock/errors.hpp"

namespace phaselock {

SpatialGrid::SpatialGrid(double r_min, double r_max, std::size_t n)
    : r_min_(r_min), r_max_(r_max), n_(n) {
    if (!(r_max > r_min))
        throw ValidationError("grid: r_max must exceed r_min");
    if (n < 2 || (n & (n - 1)) != 0)
        throw ValidationError("grid: point count must be a power of two >= 2, got " +
                              std::to_string(n));
    dr_ = (r_max - r_min) / static_cast<double>(n);
    dk_ = 2.0 * M_PI / (static_cast<double>(n) * dr_);
    r_.resize(n);
    k_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        r_[j] = r_min + static_cast<double>(j) * dr_;
        // FFT ordering: non-negative frequencies first, then negative.
        const auto sj = static_cast<std::ptrdiff_t>(j);
        const auto sn = static_cast<std::ptrdiff_t>(n);
        k_[j] = dk_ * static_cast<double>(sj < sn / 2 ? sj : sj - sn);
    }
}

}  // namespace phaselock
