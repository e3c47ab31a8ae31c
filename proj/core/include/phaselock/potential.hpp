#pragma once

#include <cstdint>
#include <vector>

#include "phaselock/grid.hpp"

namespace phaselock {

struct ControlPoint {
    double r;  // bohr
    double v;  // hartree
};

/// Dissociative 1D potential defined by a natural cubic spline through its
/// control points. Beyond the last point the curve is held at the asymptotic
/// value; below the first point it continues with the end slope (the natural
/// end condition keeps V'' continuous there).
class PotentialCurve {
public:
    double value(double r) const;
    double derivative(double r) const;
    double asymptote() const { return y_.back(); }

    const std::vector<ControlPoint>& control_points() const { return points_; }
    double first_r() const { return x_.front(); }
    double last_r() const { return x_.back(); }

    std::vector<double> sample(const SpatialGrid& grid) const;

    friend PotentialCurve build_spline_potential(std::vector<ControlPoint> points);

private:
    PotentialCurve() = default;
    std::size_t segment(double r) const;

    std::vector<ControlPoint> points_;
    std::vector<double> x_, y_, m_;  // knots, values, second derivatives
};

/// Natural cubic spline through >= 4 control points with strictly
/// increasing r.
PotentialCurve build_spline_potential(std::vector<ControlPoint> points);

/// Multiplies every control value except the first by a factor drawn
/// uniformly from [1-fraction, 1+fraction]; deterministic in `seed`. The
/// first point anchors the energy origin shared across an ensemble.
PotentialCurve perturb_potential(const PotentialCurve& curve, std::uint64_t seed,
                                 double fraction);

/// Coulomb repulsion relation E = 1/R in atomic units (hartree <-> bohr).
double coulomb_energy_from_distance(double r_bohr);
double coulomb_distance_from_energy(double e_hartree);

/// Two dissociative curves sharing one coordinate; `offset` (hartree,
/// nominally one photon energy) is added to v2 on evaluation.
struct PotentialPair {
    PotentialCurve v1;
    PotentialCurve v2;
    double offset = 0.0;

    std::vector<double> sample_v1(const SpatialGrid& grid) const { return v1.sample(grid); }
    std::vector<double> sample_v2(const SpatialGrid& grid) const;
};

}  // namespace phaselock
