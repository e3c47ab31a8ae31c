#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace phaselock {

/// Transform-limited carrier + Gaussian envelope, described in lab units
/// (fs, PHz). `fwhm` is the intensity FWHM, the quantity pulse
/// characterization actually reports.
struct PulseSpec {
    double omega0 = 2.355;          // carrier angular frequency, rad/fs
    double fwhm = 7.0;              // intensity FWHM, fs
    double e0 = 1.0;                // peak field amplitude, arbitrary units
    std::size_t n_samples = 16384;  // spectral samples (power of two)
    double time_window = 1024.0;    // representable time span, fs

    double nu0() const;                      // carrier frequency, PHz
    double sigma_t() const;                  // field envelope sigma, fs
    double bandwidth_sigma() const;          // field spectral sigma, PHz
    double dnu() const { return 1.0 / time_window; }
    /// Analytic field spectrum of the envelope carried at nu0 (real Gaussian).
    double spectrum_at(double nu) const;

    void validate() const;
};

/// Spectral mask A_tot (1 + A_R exp(i 2 pi tau (nu - nu_L) + i phi_L)):
/// a pump-probe pulse pair with delay tau, relative amplitude A_R and a
/// delay-independent construction at the locking frequency nu_L.
struct ShaperMask {
    double a_tot = 1.0;
    double a_r = 1.0;
    double tau = 0.0;    // fs
    double phi_l = 0.0;  // rad
    double nu_l = 0.0;   // PHz

    void validate() const;
};

std::complex<double> shaper_mask(double nu, const ShaperMask& mask);

/// Pump-probe phase actually imposed on the molecule: phi_L - 2 pi nu_L tau,
/// wrapped to (-pi, pi].
double controllable_phase(double phi_l, double nu_l, double tau);

/// Wraps any angle to (-pi, pi].
double wrap_angle(double phi);

struct TimeField {
    std::vector<double> t;                     // fs, centered on zero
    std::vector<std::complex<double>> field;   // analytic signal
    std::vector<double> intensity() const;     // |field|^2
};

/// Synthesizes the shaped time-domain field, inverse transform of
/// M(nu) E(nu). Throws if the mask delay does not fit the representable
/// window.
TimeField shaped_field(const PulseSpec& pulse, const ShaperMask& mask);

struct PulsePairShape {
    double t_main = 0.0, t_secondary = 0.0;  // envelope peak positions, fs
    double separation = 0.0;                 // |t_main - t_secondary|
    double peak_ratio = 0.0;                 // secondary / main intensity
    double interpulse_max_rel = 0.0;         // max intensity between pulses / main,
                                             // outside 3 FWHM of either center
};

/// Locates the two dominant intensity envelope maxima of a pulse pair.
PulsePairShape analyze_pulse_pair(const TimeField& field, double fwhm);

struct Spectrum {
    std::vector<double> nu;         // PHz
    std::vector<double> intensity;  // |spectrum|^2, arbitrary units
    double fwhm = 0.0;              // intensity FWHM, PHz
};

/// Spectral intensity of the n-th power of the pulse envelope: the effective
/// field driving an n-photon transition. Its bandwidth grows as sqrt(n).
Spectrum nphoton_effective_field(const PulseSpec& pulse, int n);

}  // namespace phaselock
