#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "phaselock/binning.hpp"
#include "phaselock/propagator.hpp"

namespace phaselock {

/// The algebraic skeleton of the pump-probe ionization scheme: two excited
/// states populated with amplitudes a1, a2 by n- and (n+K)-photon pump
/// absorption, doubly ionized by m- and (m-K)-photon probe absorption with
/// matrix elements q1f, q2f into a common dication state.
struct TwoStateSystem {
    std::complex<double> a1{M_SQRT1_2, 0.0};
    std::complex<double> a2{M_SQRT1_2, 0.0};
    std::complex<double> q1f{1.0, 0.0};
    std::complex<double> q2f{1.0, 0.0};
    int pump_order = 4;        // n, photons to state 1
    int probe_order = 4;       // m, photons from state 1 to the dication
    int photon_separation = 1; // K, photon orders between states 1 and 2
    double photon_energy = 0.05695;  // hartree

    void validate() const;
};

/// Off-diagonal electronic density matrix element
/// rho12(R, t) = a1 chi1(R, t) conj(a2 chi2(R, t)).
/// The propagated wavefunctions carry their full potential phase, so the
/// relative phase exp(i (V2 - V1) t / hbar) between the surfaces is already
/// contained in the product.
std::vector<std::complex<double>> coherence_density(const PairTrajectory& traj, double t);

/// Perturbative double-ionization amplitudes (b1, b2) for probe peak field
/// E: b1 = q1f E^m, b2 = q2f E^(m-K).
std::pair<std::complex<double>, std::complex<double>> ionization_amplitudes(
    const TwoStateSystem& sys, double e_probe_peak);

struct YieldProfile {
    std::vector<double> y;     // on the trajectory grid, >= 0
    double integrated = 0.0;   // integral y dR
};

/// R-resolved dication yield at pump-probe delay tau and controllable phase
/// phi:
///   Y(R) = |a1 b1 chi1(R)|^2 + |a2 b2 chi2(R)|^2
///          + 2 Re[ a1 conj(a2) b1 conj(b2) e^{i K phi} rho12(R, tau) ].
/// One e^{i K phi} harmonic, so a phase sweep over 2 pi shows exactly K
/// modulations. Throws NumericError if Y dips below -1e-9 of its diagonal
/// scale (inconsistent magnitudes); smaller negative rounding is clamped.
YieldProfile dication_yield(const TwoStateSystem& sys, const PairTrajectory& traj, double tau,
                            double phi, double e_probe_peak);

/// Yield accumulated into KER bins through the Coulomb map E = 1/R
/// (dY = y(R) dR collected into the bin containing E(R)).
std::vector<double> bin_yield_by_ker(const SpatialGrid& grid, const std::vector<double>& y,
                                     const KerBinning& bins);

/// Per-snapshot decomposition of the coherence decay channels:
/// wavefunction overlap |int chi1* chi2 dR|, dephasing contrast
/// |int rho12 dR| / int |rho12| dR, and the (constant) populations.
struct DecoherenceSeries {
    std::vector<double> t;            // atomic time
    std::vector<double> overlap_mag;
    std::vector<double> contrast;     // NaN where undefined
    std::vector<bool> contrast_defined;
    double pop1 = 0.0, pop2 = 0.0;
};

DecoherenceSeries decoherence_decomposition(const PairTrajectory& traj);

}  // namespace phaselock
