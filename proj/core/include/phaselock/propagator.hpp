#pragma once

#include <complex>
#include <span>
#include <vector>

#include "phaselock/fft.hpp"
#include "phaselock/potential.hpp"
#include "phaselock/wavefunction.hpp"

namespace phaselock {

/// Smooth cos^2 amplitude ramp applied each step from start_r to the grid
/// edge; strength 1 masks fully to zero at the edge, 0 disables.
struct AbsorberSpec {
    double strength = 0.0;
    double start_r = 0.0;

    bool enabled() const { return strength > 0.0; }
};

/// Symmetric (Strang) split-operator stepper for one potential: half
/// potential phase, full kinetic phase in momentum space, half potential
/// phase. Second order in dt, exactly norm-conserving without the absorber.
/// Each instance owns its FFT plans and is meant to be used by one thread.
class SplitOperatorPropagator {
public:
    SplitOperatorPropagator(const SpatialGrid& grid, std::span<const double> potential,
                            double mass, double dt, AbsorberSpec absorber = {});

    void step(Wavefunction& chi) const;
    void advance(Wavefunction& chi, long steps) const;

    double dt() const { return dt_; }
    bool absorber_enabled() const { return has_mask_; }

private:
    SpatialGrid grid_;
    double dt_;
    std::vector<std::complex<double>> half_v_phase_;
    std::vector<std::complex<double>> kinetic_phase_;  // includes the 1/n of the round trip
    std::vector<double> mask_;
    bool has_mask_ = false;
    Fft fft_;
};

/// Convenience single step on a spline potential (samples the curve and
/// builds a throwaway stepper; loops should construct the stepper once).
void split_operator_step(Wavefunction& chi, const PotentialCurve& potential, double dt);

struct PropagationParams {
    double dt = 0.5;                   // atomic time
    double total_time = 0.0;           // atomic time
    double snapshot_interval = 0.0;    // atomic time, positive multiple of dt
    double absorber_strength = 0.0;    // 0 disables the absorbing edge mask
    double absorber_start_r = 0.0;
    double edge_density_limit = 1e-8;  // error threshold with the absorber off
};

/// Entangled pair of nuclear wave packets on two electronic states, with
/// constant excitation amplitudes (no internal conversion in this model).
struct TwoStateWavepacket {
    Wavefunction chi1;
    Wavefunction chi2;
    std::complex<double> a1{1.0, 0.0};
    std::complex<double> a2{0.0, 0.0};
    PotentialPair potentials;

    void validate() const;
};

struct PairSnapshot {
    double t;  // atomic time
    Wavefunction chi1;
    Wavefunction chi2;
};

struct PairTrajectory {
    SpatialGrid grid;
    std::vector<double> v1, v2;  // sampled potentials, v2 includes the pair offset
    std::complex<double> a1, a2;
    double mass = 0.0;
    std::vector<PairSnapshot> snapshots;

    const PairSnapshot& nearest(double t) const;
    const PairSnapshot& at_time(double t, double tol) const;
    double t_begin() const { return snapshots.front().t; }
    double t_end() const { return snapshots.back().t; }
};

/// Evolves both packets independently on V1 and V2 (no coupling), recording
/// snapshots every snapshot_interval starting at t = 0. Throws NumericError
/// if density reaches the grid edge while the absorber is off.
PairTrajectory propagate_pair(const TwoStateWavepacket& wp, const PropagationParams& params);

/// R-resolved phase difference arg(chi2 conj(chi1)) unwrapped from the
/// density maximum outward; points where either density is below
/// density_floor * peak are dropped.
struct PhaseProfile {
    std::vector<double> r;
    std::vector<double> phase;
    std::vector<std::size_t> index;  // grid indices of the retained points
};

PhaseProfile phase_difference(const Wavefunction& chi1, const Wavefunction& chi2,
                              double density_floor = 1e-4);

}  // namespace phaselock
