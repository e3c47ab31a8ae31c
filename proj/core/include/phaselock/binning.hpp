#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace phaselock {

/// Uniform kinetic-energy-release binning in eV.
class KerBinning {
public:
    KerBinning() = default;
    KerBinning(double e_min, double e_max, std::size_t n);

    double e_min() const { return e_min_; }
    double e_max() const { return e_max_; }
    std::size_t size() const { return n_; }
    double width() const { return (e_max_ - e_min_) / static_cast<double>(n_); }
    double center(std::size_t i) const {
        return e_min_ + (static_cast<double>(i) + 0.5) * width();
    }
    double lower(std::size_t i) const { return e_min_ + static_cast<double>(i) * width(); }
    std::optional<std::size_t> index_of(double e) const;

    bool operator==(const KerBinning& o) const {
        return e_min_ == o.e_min_ && e_max_ == o.e_max_ && n_ == o.n_;
    }

private:
    double e_min_ = 0.0, e_max_ = 1.0;
    std::size_t n_ = 1;
};

}  // namespace phaselock
