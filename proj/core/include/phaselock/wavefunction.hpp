#pragma once

#include <complex>
#include <vector>

#include "phaselock/grid.hpp"

namespace phaselock {

/// Nuclear wavefunction chi(R) on a shared grid, normalized so that
/// sum |chi_j|^2 dr = 1. Mass is the reduced mass in electron-mass units.
class Wavefunction {
public:
    Wavefunction(SpatialGrid grid, double mass);

    const SpatialGrid& grid() const { return grid_; }
    double mass() const { return mass_; }

    std::vector<std::complex<double>>& amplitudes() { return amp_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }
    std::complex<double>& operator[](std::size_t j) { return amp_[j]; }
    const std::complex<double>& operator[](std::size_t j) const { return amp_[j]; }
    std::size_t size() const { return amp_.size(); }

    double norm_squared() const;
    double norm() const;
    void normalize();

    double position_mean() const;
    double position_variance() const;
    /// <p> via the spectral derivative.
    double momentum_mean() const;
    /// Fraction of the norm in the outermost `fraction` of the grid.
    double edge_fraction(double fraction = 0.02) const;

private:
    SpatialGrid grid_;
    double mass_;
    std::vector<std::complex<double>> amp_;
};

/// Normalized Gaussian exp(-(R-r0)^2 / 4 sigma^2) exp(i p0 R); sigma is the
/// position standard deviation, p0 the momentum boost (atomic units).
Wavefunction init_gaussian(const SpatialGrid& grid, double r0, double sigma, double p0,
                           double mass);

/// Discrete inner product integral chi1*(R) chi2(R) dR.
std::complex<double> overlap(const Wavefunction& chi1, const Wavefunction& chi2);

}  // namespace phaselock
