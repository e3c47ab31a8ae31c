#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phaselock/binning.hpp"
#include "phaselock/rng.hpp"

namespace phaselock {

struct Species {
    int id = 0;
    std::string name;
    double mass_u = 1.0;
    int charge = 1;
};

class SpeciesTable {
public:
    SpeciesTable() = default;
    explicit SpeciesTable(std::vector<Species> list);

    const std::vector<Species>& list() const { return list_; }
    const Species& by_id(int id) const;
    bool has(int id) const;

    /// CF3+ / COCH3+ / CF2+ fragments of 3F-acetone (integer masses in u).
    static SpeciesTable default_table();

private:
    std::vector<Species> list_;
};

/// Ideal linear VMI forward model: transverse momentum maps to detector
/// position, longitudinal momentum to a time-of-flight offset around the
/// species arrival time t0 = tof_base * sqrt(m/q). Species are assigned by
/// disjoint time-of-flight windows around each t0.
struct DetectorCalibration {
    double cx_mm_per_au = 0.1;
    double cy_mm_per_au = 0.1;
    double ct_ns_per_au = 0.05;
    double tof_base_ns = 1000.0;
    double tof_window_ns = 250.0;

    double t0_ns(const Species& s) const;
    void validate() const;
};

struct IonEvent {
    std::int64_t shot_id = 0;
    int species_id = 0;
    std::array<double, 3> p{0.0, 0.0, 0.0};  // atomic units
    double x_mm = 0.0, y_mm = 0.0, t_ns = 0.0;
};

struct ShotRecord {
    std::int64_t shot_id = 0;
    double tau_fs = 0.0;
    double phi = 0.0;  // controllable pump-probe phase, rad
    std::vector<IonEvent> ions;
};

std::array<double, 3> momentum_to_detector(const std::array<double, 3>& p, const Species& s,
                                           const DetectorCalibration& calib);
/// Exact inverse of momentum_to_detector for the assigned species.
std::array<double, 3> reconstruct_momentum(const std::array<double, 3>& xyt, const Species& s,
                                           const DetectorCalibration& calib);
/// Species whose time-of-flight window contains t_ns; throws NumericError
/// for unassignable hits.
const Species& assign_species(double t_ns, const SpeciesTable& table,
                              const DetectorCalibration& calib);

/// Kinetic energy release of a back-to-back pair with momentum magnitude p
/// (a.u.) and fragment masses in u, in eV.
double pair_ker_from_momentum(double p_au, double mass_a_u, double mass_b_u);
/// Momentum magnitude of a back-to-back pair carrying `ker_ev`.
double pair_momentum_from_ker(double ker_ev, double mass_a_u, double mass_b_u);

/// One scan point of a yield map: KER distribution at a pump-probe setting.
struct YieldMapPoint {
    double tau_fs = 0.0;
    double phi = 0.0;
    std::vector<double> yield;  // per KER bin, >= 0
};

struct YieldMap {
    KerBinning bins;
    std::vector<YieldMapPoint> points;

    double integrated(std::size_t point) const;
    double max_integrated() const;
};

struct EventGenParams {
    std::int64_t shots_per_point = 4000;
    double pair_prob = 0.5;
    int species_a = 1;                       // first fragment of the correlated pair
    int species_b = 2;
    std::vector<std::pair<int, double>> background_rates;  // species id -> Poisson mean/shot
    double background_sigma_p = 30.0;        // a.u. per Cartesian component
    /// Scale the pair probability by the scan point's integrated yield
    /// (relative to the map maximum) so delay/phase modulations survive into
    /// the event stream. Off = constant pair_prob at every point.
    bool modulate_pair_prob = true;
    double blur_xy_mm = 0.0;                 // optional detector resolution
    double blur_t_ns = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Generates momentum-conserving fragment pairs (KER sampled from the yield
/// map, isotropic emission) plus uncorrelated thermal background, mapped
/// through the detector model. Deterministic in `seed` for any thread count.
std::vector<ShotRecord> sample_pair_events(const YieldMap& map, const SpeciesTable& table,
                                           const DetectorCalibration& calib,
                                           const EventGenParams& params, int threads = 1);

/// Event file: '#' header with format version, species table, calibration and
/// per-point shot counts, then one row per ion:
///   shot_id delay_fs phase_rad species_id x_mm y_mm t_ns
void write_events(const std::string& path, const std::vector<ShotRecord>& shots,
                  const SpeciesTable& table, const DetectorCalibration& calib,
                  const std::vector<std::pair<std::string, std::string>>& extra_header = {});

/// Streaming reader; shots come back in shot_id order, including ion-less
/// shots (reconstructed from the per-point counts in the header), with
/// momenta rebuilt from the detector coordinates. Memory is bounded by the
/// largest single shot.
class EventStreamReader {
public:
    explicit EventStreamReader(const std::string& path);
    ~EventStreamReader();
    EventStreamReader(EventStreamReader&&) noexcept;
    EventStreamReader& operator=(EventStreamReader&&) noexcept;

    const SpeciesTable& species() const;
    const DetectorCalibration& calibration() const;
    std::int64_t total_shots() const;

    std::optional<ShotRecord> next_shot();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct EventFile {
    SpeciesTable species;
    DetectorCalibration calibration;
    std::vector<ShotRecord> shots;
};

EventFile read_events(const std::string& path);

}  // namespace phaselock
