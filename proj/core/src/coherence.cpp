#include "phaselock/coherence.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "phaselock/errors.hpp"
#include "phaselock/units.hpp"

namespace phaselock {

void TwoStateSystem::validate() const {
    if (pump_order < 1) throw ValidationError("two-state system: pump order must be >= 1");
    if (probe_order < 2)
        throw ValidationError("two-state system: probe order must be >= 2 (double ionization)");
    if (photon_separation < 1 || probe_order - photon_separation < 1)
        throw ValidationError("two-state system: photon separation must be in [1, m-1]");
    if (!std::isfinite(std::abs(a1)) || !std::isfinite(std::abs(a2)) ||
        !std::isfinite(std::abs(q1f)) || !std::isfinite(std::abs(q2f)))
        throw ValidationError("two-state system: amplitudes must be finite");
    if (std::norm(a1) + std::norm(a2) > 1.0 + 1e-12)
        throw ValidationError("two-state system: |a1|^2 + |a2|^2 exceeds 1");
    if (!(photon_energy > 0.0))
        throw ValidationError("two-state system: photon energy must be positive");
}

std::vector<std::complex<double>> coherence_density(const PairTrajectory& traj, double t) {
    if (traj.snapshots.empty()) throw NumericError("coherence_density: empty trajectory");
    if (t < traj.t_begin() - 1e-9 || t > traj.t_end() + 1e-9)
        throw ValidationError("coherence_density: t outside trajectory range");
    const PairSnapshot& s = traj.at_time(t, 0.5001 *
        (traj.snapshots.size() > 1 ? traj.snapshots[1].t - traj.snapshots[0].t : 1.0));
    const std::complex<double> pre = traj.a1 * std::conj(traj.a2);
    std::vector<std::complex<double>> rho(s.chi1.size());
    for (std::size_t j = 0; j < rho.size(); ++j)
        rho[j] = pre * s.chi1[j] * std::conj(s.chi2[j]);
    return rho;
}

std::pair<std::complex<double>, std::complex<double>> ionization_amplitudes(
    const TwoStateSystem& sys, double e_probe_peak) {
    sys.validate();
    if (!(e_probe_peak >= 0.0))
        throw ValidationError("ionization_amplitudes: field must be non-negative");
    const std::complex<double> b1 = sys.q1f * std::pow(e_probe_peak, sys.probe_order);
    const std::complex<double> b2 =
        sys.q2f * std::pow(e_probe_peak, sys.probe_order - sys.photon_separation);
    return {b1, b2};
}

YieldProfile dication_yield(const TwoStateSystem& sys, const PairTrajectory& traj, double tau,
                            double phi, double e_probe_peak) {
    const auto [b1, b2] = ionization_amplitudes(sys, e_probe_peak);
    const double w1 = std::norm(traj.a1) * std::norm(b1);
    const double w2 = std::norm(traj.a2) * std::norm(b2);
    const std::vector<std::complex<double>> rho = coherence_density(traj, tau);
    const PairSnapshot& s = traj.at_time(tau, 0.5001 *
        (traj.snapshots.size() > 1 ? traj.snapshots[1].t - traj.snapshots[0].t : 1.0));

    const std::complex<double> cross =
        2.0 * traj.a1 * std::conj(traj.a2) * b1 * std::conj(b2) *
        std::polar(1.0, static_cast<double>(sys.photon_separation) * phi);

    YieldProfile out;
    out.y.resize(rho.size());
    double ymin = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < rho.size(); ++j) {
        const double diag = w1 * std::norm(s.chi1[j]) + w2 * std::norm(s.chi2[j]);
        const double y = diag + (cross * rho[j]).real();
        scale = std::max(scale, diag);
        ymin = std::min(ymin, y);
        out.y[j] = y;
    }
    if (ymin < -1e-9 * std::max(scale, std::numeric_limits<double>::min()))
        throw NumericError("dication_yield: negative yield " + std::to_string(ymin) +
                           " signals inconsistent amplitude magnitudes");
    double sum = 0.0;
    for (double& y : out.y) {
        if (y < 0.0) y = 0.0;  // rounding-level undershoot only
        sum += y;
    }
    out.integrated = sum * traj.grid.dr();
    return out;
}

std::vector<double> bin_yield_by_ker(const SpatialGrid& grid, const std::vector<double>& y,
                                     const KerBinning& bins) {
    if (y.size() != grid.size())
        throw ValidationError("bin_yield_by_ker: profile not on this grid");
    std::vector<double> out(bins.size(), 0.0);
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double r = grid.r(j);
        if (!(r > 0.0)) continue;
        const double e_ev = units::hartree_to_ev(coulomb_energy_from_distance(r));
        if (const auto i = bins.index_of(e_ev)) out[*i] += y[j] * grid.dr();
    }
    return out;
}

DecoherenceSeries decoherence_decomposition(const PairTrajectory& traj) {
    if (traj.snapshots.empty())
        throw NumericError("decoherence_decomposition: empty trajectory");
    DecoherenceSeries out;
    out.pop1 = std::norm(traj.a1);
    out.pop2 = std::norm(traj.a2);
    const double dr = traj.grid.dr();
    const double amp = std::abs(traj.a1) * std::abs(traj.a2);
    for (const auto& s : traj.snapshots) {
        out.t.push_back(s.t);
        out.overlap_mag.push_back(std::abs(overlap(s.chi1, s.chi2)));
        std::complex<double> integral{0.0, 0.0};
        double magnitude = 0.0;
        for (std::size_t j = 0; j < s.chi1.size(); ++j) {
            const std::complex<double> rho = s.chi1[j] * std::conj(s.chi2[j]);
            integral += rho;
            magnitude += std::abs(rho);
        }
        integral *= dr;
        magnitude *= dr;
        // Contrast is a ratio, so the constant a1 a2* prefactor cancels; the
        // denominator vanishing means the packets no longer share support.
        if (magnitude * amp > 1e-300 && magnitude > 1e-12) {
            out.contrast.push_back(std::abs(integral) / magnitude);
            out.contrast_defined.push_back(true);
        } else {
            out.contrast.push_back(std::numeric_limits<double>::quiet_NaN());
            out.contrast_defined.push_back(false);
        }
    }
    return out;
}

}  // namespace phaselock
