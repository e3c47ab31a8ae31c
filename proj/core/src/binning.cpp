#include "phaselock/binning.hpp"

#include "phaselock/errors.hpp"

namespace phaselock {

KerBinning::KerBinning(double e_min, double e_max, std::size_t n)
    : e_min_(e_min), e_max_(e_max), n_(n) {
    if (!(e_max > e_min)) throw ValidationError("binning: e_max must exceed e_min");
    if (n == 0) throw ValidationError("binning: need at least one bin");
}

std::optional<std::size_t> KerBinning::index_of(double e) const {
    if (e < e_min_ || e >= e_max_) return std::nullopt;
    auto i = static_cast<std::size_t>((e - e_min_) / width());
    if (i >= n_) i = n_ - 1;  // e just below e_max after rounding
    return i;
}

}  // namespace phaselock
