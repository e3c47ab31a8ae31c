#include "phaselock/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phaselock/errors.hpp"
#include "phaselock/fft.hpp"

namespace phaselock {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

/// Intensity FWHM of a sampled non-negative profile by linear interpolation
/// of the half-maximum crossings around the global peak.
double sampled_fwhm(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t ipk =
        static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const double half = 0.5 * y[ipk];
    double left = x.front(), right = x.back();
    for (std::size_t i = ipk; i-- > 0;) {
        if (y[i] <= half) {
            const double f = (half - y[i]) / (y[i + 1] - y[i]);
            left = x[i] + f * (x[i + 1] - x[i]);
            break;
        }
    }
    for (std::size_t i = ipk + 1; i < y.size(); ++i) {
        if (y[i] <= half) {
            const double f = (y[i - 1] - half) / (y[i - 1] - y[i]);
            right = x[i - 1] + f * (x[i] - x[i - 1]);
            break;
        }
    }
    return right - left;
}

}  // namespace

double PulseSpec::nu0() const { return omega0 / kTwoPi; }

double PulseSpec::sigma_t() const {
    // Intensity FWHM -> field envelope sigma: I ~ exp(-t^2 / sigma_t^2).
    return fwhm / (2.0 * std::sqrt(std::log(2.0)));
}

double PulseSpec::bandwidth_sigma() const { return 1.0 / (kTwoPi * sigma_t()); }

double PulseSpec::spectrum_at(double nu) const {
    const double st = sigma_t();
    const double d = nu - nu0();
    return e0 * std::sqrt(kTwoPi) * st * std::exp(-2.0 * M_PI * M_PI * st * st * d * d);
}

void PulseSpec::validate() const {
    if (!(fwhm > 0.0)) throw ValidationError("pulse: FWHM must be positive");
    if (!(e0 >= 0.0)) throw ValidationError("pulse: amplitude must be non-negative");
    if (n_samples < 16 || (n_samples & (n_samples - 1)) != 0)
        throw ValidationError("pulse: sample count must be a power of two >= 16");
    if (!(time_window > 0.0)) throw ValidationError("pulse: time window must be positive");
    // The spectral window must cover the carrier plus tails, and the envelope
    // bandwidth must be oversampled at least 8x.
    const double nu_span = static_cast<double>(n_samples) * dnu();
    if (nu0() + 8.0 * bandwidth_sigma() > nu_span)
        throw ValidationError("pulse: spectral window does not cover the carrier bandwidth");
    if (bandwidth_sigma() < 8.0 * dnu())
        throw ValidationError(
            "pulse: spectral sampling too coarse (< 8 samples per bandwidth sigma); "
            "reduce time_window or raise n_samples");
}

void ShaperMask::validate() const {
    if (!(a_tot > 0.0)) throw ValidationError("shaper: A_tot must be positive");
    if (!(a_r >= 0.0)) throw ValidationError("shaper: A_R must be non-negative");
}

std::complex<double> shaper_mask(double nu, const ShaperMask& mask) {
    return mask.a_tot *
           (1.0 + mask.a_r * std::polar(1.0, kTwoPi * mask.tau * (nu - mask.nu_l) + mask.phi_l));
}

double wrap_angle(double phi) {
    double w = std::remainder(phi, kTwoPi);  // (-pi, pi] up to the boundary
    if (w <= -M_PI) w += kTwoPi;
    return w;
}

double controllable_phase(double phi_l, double nu_l, double tau) {
    return wrap_angle(phi_l - kTwoPi * nu_l * tau);
}

TimeField shaped_field(const PulseSpec& pulse, const ShaperMask& mask) {
    pulse.validate();
    mask.validate();
    if (std::abs(mask.tau) > 0.5 * pulse.time_window - 5.0 * pulse.fwhm)
        throw ValidationError("shaped_field: delay " + std::to_string(mask.tau) +
                              " fs does not fit the representable window (aliasing)");

    const std::size_t n = pulse.n_samples;
    const double dnu = pulse.dnu();
    std::vector<std::complex<double>> f(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double nu = static_cast<double>(j) * dnu;
        f[j] = shaper_mask(nu, mask) * pulse.spectrum_at(nu);
    }
    Fft fft(n);
    fft.inverse(f.data());  // analytic signal on the circular time grid

    // Reorder so t runs over [-T/2, T/2); bin j maps to t = j dt (mod T).
    const double dt = pulse.time_window / static_cast<double>(n);
    TimeField out;
    out.t.resize(n);
    out.field.resize(n);
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = (j + half) % n;
        out.t[j] = (static_cast<double>(j) - static_cast<double>(half)) * dt;
        out.field[j] = f[src] * dnu;
    }
    return out;
}

std::vector<double> TimeField::intensity() const {
    std::vector<double> out(field.size());
    for (std::size_t j = 0; j < field.size(); ++j) out[j] = std::norm(field[j]);
    return out;
}

PulsePairShape analyze_pulse_pair(const TimeField& field, double fwhm) {
    const std::vector<double> inten = field.intensity();
    const std::size_t n = inten.size();
    if (n < 8) throw ValidationError("analyze_pulse_pair: field too short");

    // All local maxima above 1e-8 of the global peak, best first.
    struct Peak {
        double t, v;
    };
    std::vector<Peak> peaks;
    const double global = *std::max_element(inten.begin(), inten.end());
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (inten[j] >= inten[j - 1] && inten[j] > inten[j + 1] && inten[j] > 1e-8 * global) {
            // Parabolic refinement of the peak position.
            const double den = inten[j - 1] - 2.0 * inten[j] + inten[j + 1];
            double shift = 0.0;
            if (den < 0.0) shift = 0.5 * (inten[j - 1] - inten[j + 1]) / den;
            peaks.push_back({field.t[j] + shift * (field.t[1] - field.t[0]), inten[j]});
        }
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.v > b.v; });
    if (peaks.empty()) throw NumericError("analyze_pulse_pair: no envelope maxima found");

    PulsePairShape shape;
    shape.t_main = peaks[0].t;
    if (peaks.size() == 1) {
        shape.t_secondary = peaks[0].t;
        shape.peak_ratio = 1.0;
        return shape;
    }
    // Secondary pulse: strongest maximum separated by more than one FWHM.
    const Peak* second = nullptr;
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        if (std::abs(peaks[i].t - shape.t_main) > fwhm) {
            second = &peaks[i];
            break;
        }
    }
    if (!second) second = &peaks[1];
    shape.t_secondary = second->t;
    shape.peak_ratio = second->v / peaks[0].v;
    shape.separation = std::abs(shape.t_main - shape.t_secondary);

    const double lo = std::min(shape.t_main, shape.t_secondary) + 3.0 * fwhm;
    const double hi = std::max(shape.t_main, shape.t_secondary) - 3.0 * fwhm;
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        if (field.t[j] > lo && field.t[j] < hi) worst = std::max(worst, inten[j]);
    shape.interpulse_max_rel = worst / peaks[0].v;
    return shape;
}

Spectrum nphoton_effective_field(const PulseSpec& pulse, int n) {
    pulse.validate();
    if (n < 1) throw ValidationError("nphoton_effective_field: order must be >= 1");

    const std::size_t ns = pulse.n_samples;
    const double dt = pulse.time_window / static_cast<double>(ns);
    const double st = pulse.sigma_t();
    std::vector<std::complex<double>> f(ns);
    for (std::size_t j = 0; j < ns; ++j) {
        // Envelope centered in the circular window; carrier is irrelevant for
        // the envelope bandwidth, so transform the baseband envelope power.
        const double t = (static_cast<double>(j) - static_cast<double>(ns / 2)) * dt;
        const double env = pulse.e0 * std::exp(-t * t / (2.0 * st * st));
        f[j] = std::pow(env, n);
    }
    Fft fft(ns);
    fft.forward(f.data());

    // Keep the non-negative frequency half, symmetric about zero.
    Spectrum out;
    const std::size_t keep = ns / 2;
    out.nu.resize(2 * keep - 1);
    out.intensity.resize(2 * keep - 1);
    const double dnu = pulse.dnu();
    for (std::size_t j = 0; j < 2 * keep - 1; ++j) {
        const auto bin = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(keep - 1);
        out.nu[j] = static_cast<double>(bin) * dnu;
        const std::size_t src = bin >= 0 ? static_cast<std::size_t>(bin)
                                         : ns - static_cast<std::size_t>(-bin);
        out.intensity[j] = std::norm(f[src]);
    }
    out.fwhm = sampled_fwhm(out.nu, out.intensity);
    return out;
}

}  // namespace phaselock
