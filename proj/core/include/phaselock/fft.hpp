#pragma once

#include <complex>
#include <cstddef>

namespace phaselock {

/// Thin RAII wrapper around FFTW complex-to-complex plans of fixed length.
/// Plan creation is serialized internally (the FFTW planner is not
/// thread-safe); execution on a caller buffer is safe from the owning thread.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&& other) noexcept;
    Fft& operator=(Fft&& other) noexcept;

    std::size_t size() const { return n_; }

    /// In-place unnormalized transforms (forward: e^{-ikx}, inverse: e^{+ikx}).
    void forward(std::complex<double>* data) const;
    void inverse(std::complex<double>* data) const;

private:
    std::size_t n_ = 0;
    void* fwd_ = nullptr;  // fftw_plan
    void* inv_ = nullptr;
};

}  // namespace phaselock
