#pragma once

#include <cstddef>
#include <vector>

namespace phaselock {

/// Uniform 1D coordinate grid R_j = r_min + j*dr, j = 0..n-1, with the
/// conjugate momentum grid in FFT ordering. n must be a power of two so the
/// split-operator kinetic step can use a radix-2 transform; dk = 2*pi/(n*dr).
class SpatialGrid {
public:
    SpatialGrid(double r_min, double r_max, std::size_t n);

    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    double dr() const { return dr_; }
    double dk() const { return dk_; }
    std::size_t size() const { return n_; }

    double r(std::size_t j) const { return r_[j]; }
    const std::vector<double>& points() const { return r_; }
    /// Momentum values in FFT bin order (0, dk, ..., -2dk, -dk).
    const std::vector<double>& momenta() const { return k_; }

    bool operator==(const SpatialGrid& o) const {
        return r_min_ == o.r_min_ && r_max_ == o.r_max_ && n_ == o.n_;
    }

private:
    double r_min_, r_max_, dr_, dk_;
    std::size_t n_;
    std::vector<double> r_, k_;
};

}  // namespace phaselock
