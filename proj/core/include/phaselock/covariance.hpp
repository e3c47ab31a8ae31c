#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "phaselock/binning.hpp"
#include "phaselock/events.hpp"

namespace phaselock {

/// Total kinetic energy release of a fragment pair, eV.
double pair_ker(const std::array<double, 3>& p_a, const std::array<double, 3>& p_b,
                double mass_a_u, double mass_b_u);

/// Momentum-conservation gate |p_a + p_b| < epsilon (a.u.).
bool momentum_gate(const std::array<double, 3>& p_a, const std::array<double, 3>& p_b,
                   double epsilon);

enum class ScanAxis { delay, phase };

struct CovarianceMap {
    ScanAxis axis = ScanAxis::delay;
    std::vector<double> scan_values;       // per scan point, fs or rad
    std::vector<double> scan_tau, scan_phi;
    KerBinning bins;
    std::vector<double> value;             // points x bins, row-major
    std::vector<double> sigma;             // jackknife error, same layout
    std::vector<std::int64_t> shots;       // per point
    bool rate_warning = false;             // coincidence validity only

    double at(std::size_t point, std::size_t bin) const {
        return value[point * bins.size() + bin];
    }
    double sigma_at(std::size_t point, std::size_t bin) const {
        return sigma[point * bins.size() + bin];
    }
};

/// Single-pass accumulator for KER-resolved, momentum-gated pair statistics
/// between two species. Per shot and KER bin it counts the distinct gated
/// species-A members (u), species-B members (v) and gated pairs, keeping the
/// moment sums needed for the covariance <uv> - <u><v>, its delete-one-shot
/// jackknife error, and the plain coincidence histogram. All sums are exact
/// integer counts, so partial accumulators merge associatively and results
/// do not depend on chunking or thread count. Memory is bins x scan points,
/// independent of the shot count.
class PairStatsAccumulator {
public:
    PairStatsAccumulator(std::vector<std::pair<double, double>> scan_points, KerBinning bins,
                         int species_a, int species_b, double epsilon);

    void add_shot(const ShotRecord& shot, double mass_a_u, double mass_b_u);
    void merge(const PairStatsAccumulator& other);

    CovarianceMap finalize_covariance(ScanAxis axis) const;
    CovarianceMap finalize_coincidence(ScanAxis axis) const;

    std::int64_t total_shots() const;
    double mean_pairs_per_shot() const;

private:
    std::size_t point_index(double tau, double phi) const;

    std::vector<std::pair<double, double>> points_;
    KerBinning bins_;
    int species_a_, species_b_;
    double epsilon_;

    struct Cell {
        double su = 0, sv = 0, suv = 0, su2 = 0, sv2 = 0;
        double su2v = 0, suv2 = 0, su2v2 = 0;
        double pairs = 0;
    };
    std::vector<Cell> cells_;            // points x bins
    std::vector<std::int64_t> nshots_;   // per point
    double total_pairs_ = 0;
    std::int64_t total_shots_ = 0;
};

/// Covariance map over in-memory shots (spec'd defaults: epsilon well below
/// typical pair momenta). Shots are grouped by their exact (tau, phi) scan
/// point; every point needs at least two shots.
CovarianceMap covariance_map(std::span<const ShotRecord> shots, const SpeciesTable& table,
                             int species_a, int species_b, const KerBinning& bins,
                             ScanAxis axis, double epsilon, int threads = 1);

/// Direct gated pair counting; ground truth for covariance on low-rate data.
/// Sets rate_warning when the mean pair rate exceeds one per shot.
CovarianceMap coincidence_oracle(std::span<const ShotRecord> shots, const SpeciesTable& table,
                                 int species_a, int species_b, const KerBinning& bins,
                                 ScanAxis axis, double epsilon);

/// Streaming variants fed from an event file.
CovarianceMap covariance_map_stream(EventStreamReader& reader, int species_a, int species_b,
                                    const KerBinning& bins, ScanAxis axis, double epsilon);

void write_covariance_map(const std::string& path, const CovarianceMap& map,
                          const std::vector<std::pair<std::string, std::string>>& header = {});
CovarianceMap read_covariance_map(const std::string& path);

}  // namespace phaselock
