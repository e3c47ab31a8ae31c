#include "phaselock/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phaselock/errors.hpp"

namespace phaselock {

SplitOperatorPropagator::SplitOperatorPropagator(const SpatialGrid& grid,
                                                 std::span<const double> potential,
                                                 double mass, double dt,
                                                 AbsorberSpec absorber)
    : grid_(grid), dt_(dt), fft_(grid.size()) {
    if (!(dt > 0.0)) throw ValidationError("propagator: dt must be positive");
    if (!(mass > 0.0)) throw ValidationError("propagator: mass must be positive");
    if (potential.size() != grid.size())
        throw ValidationError("propagator: potential not sampled on this grid");

    const std::size_t n = grid.size();
    half_v_phase_.resize(n);
    kinetic_phase_.resize(n);
    const double invn = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        half_v_phase_[j] = std::polar(1.0, -0.5 * potential[j] * dt);
        const double k = grid.momenta()[j];
        kinetic_phase_[j] = std::polar(invn, -k * k / (2.0 * mass) * dt);
    }

    if (absorber.enabled()) {
        if (!(absorber.start_r > grid.r_min() && absorber.start_r < grid.r_max()))
            throw ValidationError("propagator: absorber start outside grid");
        const double s = std::clamp(absorber.strength, 0.0, 1.0);
        mask_.assign(n, 1.0);
        const double span = grid.r_max() - absorber.start_r;
        for (std::size_t j = 0; j < n; ++j) {
            const double r = grid.r(j);
            if (r > absorber.start_r) {
                const double u = (r - absorber.start_r) / span;
                const double ramp = std::sin(0.5 * M_PI * u);
                mask_[j] = 1.0 - s * ramp * ramp;
            }
        }
        has_mask_ = true;
    }
}

void SplitOperatorPropagator::step(Wavefunction& chi) const {
    if (!(chi.grid() == grid_))
        throw ValidationError("propagator: wavefunction grid does not match potential grid");
    auto& a = chi.amplitudes();
    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) a[j] *= half_v_phase_[j];
    fft_.forward(a.data());
    for (std::size_t j = 0; j < n; ++j) a[j] *= kinetic_phase_[j];
    fft_.inverse(a.data());
    for (std::size_t j = 0; j < n; ++j) a[j] *= half_v_phase_[j];
    if (has_mask_)
        for (std::size_t j = 0; j < n; ++j) a[j] *= mask_[j];
}

void SplitOperatorPropagator::advance(Wavefunction& chi, long steps) const {
    for (long s = 0; s < steps; ++s) step(chi);
}

void split_operator_step(Wavefunction& chi, const PotentialCurve& potential, double dt) {
    const auto v = potential.sample(chi.grid());
    SplitOperatorPropagator prop(chi.grid(), v, chi.mass(), dt);
    prop.step(chi);
}

void TwoStateWavepacket::validate() const {
    if (!(chi1.grid() == chi2.grid()))
        throw ValidationError("wavepacket: chi1 and chi2 must share one grid");
    if (std::norm(a1) + std::norm(a2) > 1.0 + 1e-12)
        throw ValidationError("wavepacket: |a1|^2 + |a2|^2 exceeds 1");
}

const PairSnapshot& PairTrajectory::nearest(double t) const {
    if (snapshots.empty()) throw NumericError("trajectory: no snapshots");
    const PairSnapshot* best = &snapshots.front();
    double dist = std::abs(best->t - t);
    for (const auto& s : snapshots) {
        const double d = std::abs(s.t - t);
        if (d < dist) {
            dist = d;
            best = &s;
        }
    }
    return *best;
}

const PairSnapshot& PairTrajectory::at_time(double t, double tol) const {
    const PairSnapshot& s = nearest(t);
    if (std::abs(s.t - t) > tol)
        throw NumericError("trajectory: no snapshot within tolerance of t = " +
                           std::to_string(t));
    return s;
}

PairTrajectory propagate_pair(const TwoStateWavepacket& wp, const PropagationParams& params) {
    wp.validate();
    if (!(params.dt > 0.0)) throw ValidationError("propagate_pair: dt must be positive");
    if (!(params.total_time > 0.0))
        throw ValidationError("propagate_pair: total_time must be positive");
    const double ratio = params.snapshot_interval / params.dt;
    const long steps_per_snapshot = std::lround(ratio);
    if (steps_per_snapshot < 1 || std::abs(ratio - static_cast<double>(steps_per_snapshot)) > 1e-9)
        throw ValidationError("propagate_pair: snapshot_interval must be a positive multiple of dt");

    const SpatialGrid& grid = wp.chi1.grid();
    PairTrajectory traj;
    traj.grid = grid;
    traj.v1 = wp.potentials.sample_v1(grid);
    traj.v2 = wp.potentials.sample_v2(grid);
    traj.a1 = wp.a1;
    traj.a2 = wp.a2;
    traj.mass = wp.chi1.mass();

    AbsorberSpec absorber;
    if (params.absorber_strength > 0.0) {
        absorber.strength = params.absorber_strength;
        absorber.start_r = params.absorber_start_r;
    }
    SplitOperatorPropagator prop1(grid, traj.v1, wp.chi1.mass(), params.dt, absorber);
    SplitOperatorPropagator prop2(grid, traj.v2, wp.chi2.mass(), params.dt, absorber);

    Wavefunction chi1 = wp.chi1;
    Wavefunction chi2 = wp.chi2;
    const long nsnap = std::lround(params.total_time / params.snapshot_interval);
    traj.snapshots.reserve(static_cast<std::size_t>(nsnap) + 1);
    traj.snapshots.push_back({0.0, chi1, chi2});
    for (long s = 1; s <= nsnap; ++s) {
        prop1.advance(chi1, steps_per_snapshot);
        prop2.advance(chi2, steps_per_snapshot);
        if (!absorber.enabled()) {
            const double edge = std::max(chi1.edge_fraction(), chi2.edge_fraction());
            if (edge > params.edge_density_limit)
                throw NumericError(
                    "propagate_pair: wave packet reached the grid edge (edge density " +
                    std::to_string(edge) +
                    "); enlarge the grid or enable the absorbing boundary");
        }
        traj.snapshots.push_back(
            {static_cast<double>(s) * params.snapshot_interval, chi1, chi2});
    }
    return traj;
}

PhaseProfile phase_difference(const Wavefunction& chi1, const Wavefunction& chi2,
                              double density_floor) {
    if (!(chi1.grid() == chi2.grid()))
        throw ValidationError("phase_difference: wavefunctions on different grids");
    const std::size_t n = chi1.size();

    double peak1 = 0.0, peak2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        peak1 = std::max(peak1, std::norm(chi1[j]));
        peak2 = std::max(peak2, std::norm(chi2[j]));
    }
    const double floor1 = density_floor * peak1;
    const double floor2 = density_floor * peak2;

    // Retained indices and the combined-density maximum used as the
    // unwrapping anchor (phase is meaningless where density vanishes).
    std::vector<std::size_t> keep;
    keep.reserve(n);
    std::size_t anchor_pos = 0;
    double anchor_density = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d1 = std::norm(chi1[j]);
        const double d2 = std::norm(chi2[j]);
        if (d1 >= floor1 && d2 >= floor2) {
            const double combined = d1 * d2;
            if (combined > anchor_density) {
                anchor_density = combined;
                anchor_pos = keep.size();
            }
            keep.push_back(j);
        }
    }
    if (keep.empty())
        throw NumericError("phase_difference: wavefunctions have no common support");

    std::vector<double> raw(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const std::size_t j = keep[i];
        raw[i] = std::arg(chi2[j] * std::conj(chi1[j]));
    }

    // Unwrap outward from the anchor in both directions.
    std::vector<double> unwrapped(raw.size());
    unwrapped[anchor_pos] = raw[anchor_pos];
    for (std::size_t i = anchor_pos + 1; i < raw.size(); ++i) {
        const double d = raw[i] - raw[i - 1];
        unwrapped[i] = unwrapped[i - 1] + d - 2.0 * M_PI * std::round(d / (2.0 * M_PI));
    }
    for (std::size_t i = anchor_pos; i-- > 0;) {
        const double d = raw[i] - raw[i + 1];
        unwrapped[i] = unwrapped[i + 1] + d - 2.0 * M_PI * std::round(d / (2.0 * M_PI));
    }

    PhaseProfile out;
    out.index = std::move(keep);
    out.r.resize(out.index.size());
    for (std::size_t i = 0; i < out.index.size(); ++i) out.r[i] = chi1.grid().r(out.index[i]);
    out.phase = std::move(unwrapped);
    return out;
}

}  // namespace phaselock
