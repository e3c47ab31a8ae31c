#include "phaselock/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "phaselock/errors.hpp"

namespace phaselock {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0) throw ValidationError("fft: zero length");
    // Plan on a scratch buffer; FFTW_UNALIGNED lets the plan run on any
    // caller array of the same length via fftw_execute_dft.
    std::vector<std::complex<double>> scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    inv_ = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !inv_) throw NumericError("fft: plan creation failed");
}

Fft::~Fft() {
    if (fwd_ || inv_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
        if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
    }
}

Fft::Fft(Fft&& other) noexcept : n_(other.n_), fwd_(other.fwd_), inv_(other.inv_) {
    other.fwd_ = nullptr;
    other.inv_ = nullptr;
    other.n_ = 0;
}

Fft& Fft::operator=(Fft&& other) noexcept {
    if (this != &other) {
        this->~Fft();
        n_ = other.n_;
        fwd_ = other.fwd_;
        inv_ = other.inv_;
        other.fwd_ = nullptr;
        other.inv_ = nullptr;
        other.n_ = 0;
    }
    return *this;
}

void Fft::forward(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft::inverse(std::complex<double>* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(inv_), p, p);
}

}  // namespace phaselock
