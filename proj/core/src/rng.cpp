#include "phaselock/rng.hpp"

#include <cmath>

namespace phaselock {

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

long RngStream::poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda < 50.0) {
        const double limit = std::exp(-lambda);
        long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }
    const double x = lambda + std::sqrt(lambda) * normal();
    return x < 0.0 ? 0 : static_cast<long>(std::llround(x));
}

std::array<double, 3> RngStream::isotropic_direction() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * M_PI);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
}

}  // namespace phaselock
