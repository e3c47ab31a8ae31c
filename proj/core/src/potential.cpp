#include "phaselock/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phaselock/errors.hpp"
#include "phaselock/rng.hpp"

namespace phaselock {

PotentialCurve build_spline_potential(std::vector<ControlPoint> points) {
    const std::size_t n = points.size();
    if (n < 4)
        throw ValidationError("potential: need at least 4 control points, got " +
                              std::to_string(n));
    for (std::size_t i = 1; i < n; ++i) {
        if (!(points[i].r > points[i - 1].r))
            throw ValidationError("potential: control point r values must be strictly increasing");
    }

    PotentialCurve c;
    c.points_ = std::move(points);
    c.x_.resize(n);
    c.y_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.x_[i] = c.points_[i].r;
        c.y_[i] = c.points_[i].v;
    }

    // Second derivatives of the natural spline (M_0 = M_{n-1} = 0) via the
    // Thomas algorithm on the interior tridiagonal system.
    c.m_.assign(n, 0.0);
    const std::size_t ni = n - 2;  // interior knots
    std::vector<double> diag(ni), rhs(ni), upper(ni);
    for (std::size_t i = 0; i < ni; ++i) {
        const double h0 = c.x_[i + 1] - c.x_[i];
        const double h1 = c.x_[i + 2] - c.x_[i + 1];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((c.y_[i + 2] - c.y_[i + 1]) / h1 - (c.y_[i + 1] - c.y_[i]) / h0);
    }
    for (std::size_t i = 1; i < ni; ++i) {
        const double lower = c.x_[i + 1] - c.x_[i];  // sub-diagonal = h_i
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (ni > 0) {
        c.m_[n - 2] = rhs[ni - 1] / diag[ni - 1];
        for (std::size_t i = ni - 1; i-- > 0;)
            c.m_[i + 1] = (rhs[i] - upper[i] * c.m_[i + 2]) / diag[i];
    }
    return c;
}

std::size_t PotentialCurve::segment(double r) const {
    // Index i with x_[i] <= r < x_[i+1]; callers clamp outside the knot range.
    const auto it = std::upper_bound(x_.begin(), x_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    return std::min(i - 1, x_.size() - 2);
}

double PotentialCurve::value(double r) const {
    if (r >= x_.back()) return y_.back();  // flat dissociative asymptote
    if (r <= x_.front()) {
        // Natural end condition: V'' = 0 at the first knot, so a straight
        // continuation with the end slope stays C2.
        return y_.front() + derivative(x_.front()) * (r - x_.front());
    }
    const std::size_t i = segment(r);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - r) / h;
    const double b = (r - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double PotentialCurve::derivative(double r) const {
    if (r >= x_.back()) return 0.0;
    double rr = r;
    if (rr < x_.front()) rr = x_.front();
    const std::size_t i = segment(rr);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - rr) / h;
    const double b = (rr - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

std::vector<double> PotentialCurve::sample(const SpatialGrid& grid) const {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) v[j] = value(grid.r(j));
    return v;
}

PotentialCurve perturb_potential(const PotentialCurve& curve, std::uint64_t seed,
                                 double fraction) {
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw ValidationError("potential: perturbation fraction must be in [0, 1)");
    RngStream rng(seed);
    std::vector<ControlPoint> pts = curve.control_points();
    for (std::size_t i = 1; i < pts.size(); ++i)
        pts[i].v *= 1.0 + fraction * rng.uniform(-1.0, 1.0);
    return build_spline_potential(std::move(pts));
}

double coulomb_energy_from_distance(double r_bohr) {
    if (!(r_bohr > 0.0)) throw ValidationError("coulomb: distance must be positive");
    return 1.0 / r_bohr;
}

double coulomb_distance_from_energy(double e_hartree) {
    if (!(e_hartree > 0.0)) throw ValidationError("coulomb: energy must be positive");
    return 1.0 / e_hartree;
}

std::vector<double> PotentialPair::sample_v2(const SpatialGrid& grid) const {
    if (!std::isfinite(offset)) throw ValidationError("potential pair: offset must be finite");
    std::vector<double> v = v2.sample(grid);
    for (double& x : v) x += offset;
    return v;
}

}  // namespace phaselock
