#include "phaselock/wavefunction.hpp"

#include <cmath>

#include "phaselock/errors.hpp"
#include "phaselock/fft.hpp"

namespace phaselock {

Wavefunction::Wavefunction(SpatialGrid grid, double mass)
    : grid_(std::move(grid)), mass_(mass), amp_(grid_.size(), {0.0, 0.0}) {
    if (!(mass > 0.0)) throw ValidationError("wavefunction: mass must be positive");
}

double Wavefunction::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return s * grid_.dr();
}

double Wavefunction::norm() const { return std::sqrt(norm_squared()); }

void Wavefunction::normalize() {
    const double n = norm();
    if (!(n > 0.0)) throw NumericError("wavefunction: cannot normalize zero function");
    const double inv = 1.0 / n;
    for (auto& a : amp_) a *= inv;
}

double Wavefunction::position_mean() const {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < amp_.size(); ++j) {
        const double d = std::norm(amp_[j]);
        num += d * grid_.r(j);
        den += d;
    }
    if (den == 0.0) throw NumericError("wavefunction: zero density");
    return num / den;
}

double Wavefunction::position_variance() const {
    const double mean = position_mean();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < amp_.size(); ++j) {
        const double d = std::norm(amp_[j]);
        const double dr = grid_.r(j) - mean;
        num += d * dr * dr;
        den += d;
    }
    return num / den;
}

double Wavefunction::momentum_mean() const {
    std::vector<std::complex<double>> spec(amp_);
    Fft fft(spec.size());
    fft.forward(spec.data());
    double num = 0.0, den = 0.0;
    const auto& k = grid_.momenta();
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const double d = std::norm(spec[j]);
        num += d * k[j];
        den += d;
    }
    if (den == 0.0) throw NumericError("wavefunction: zero density");
    return num / den;
}

double Wavefunction::edge_fraction(double fraction) const {
    const std::size_t n = amp_.size();
    const auto start = static_cast<std::size_t>(static_cast<double>(n) * (1.0 - fraction));
    double edge = 0.0, total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = std::norm(amp_[j]);
        total += d;
        if (j >= start) edge += d;
    }
    return total == 0.0 ? 0.0 : edge / total;
}

Wavefunction init_gaussian(const SpatialGrid& grid, double r0, double sigma, double p0,
                           double mass) {
    if (!(r0 > grid.r_min() && r0 < grid.r_max()))
        throw ValidationError("init_gaussian: center outside grid");
    if (!(sigma > 0.0)) throw ValidationError("init_gaussian: sigma must be positive");
    Wavefunction chi(grid, mass);
    const double inv4s2 = 1.0 / (4.0 * sigma * sigma);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double dr = grid.r(j) - r0;
        const double env = std::exp(-dr * dr * inv4s2);
        chi[j] = std::polar(env, p0 * grid.r(j));
    }
    chi.normalize();
    return chi;
}

std::complex<double> overlap(const Wavefunction& chi1, const Wavefunction& chi2) {
    if (!(chi1.grid() == chi2.grid()))
        throw ValidationError("overlap: wavefunctions on different grids");
    std::complex<double> s{0.0, 0.0};
    for (std::size_t j = 0; j < chi1.size(); ++j) s += std::conj(chi1[j]) * chi2[j];
    return s * chi1.grid().dr();
}

}  // namespace phaselock
