#include "phaselock/events.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "phaselock/columnar.hpp"
#include "phaselock/errors.hpp"
#include "phaselock/parallel.hpp"
#include "phaselock/units.hpp"

namespace phaselock {

namespace {
constexpr std::size_t kShotChunk = 4096;  // fixed → reproducible for any thread count
}

SpeciesTable::SpeciesTable(std::vector<Species> list) : list_(std::move(list)) {
    for (std::size_t i = 0; i < list_.size(); ++i) {
        if (!(list_[i].mass_u > 0.0))
            throw ValidationError("species '" + list_[i].name + "': mass must be positive");
        if (list_[i].charge == 0)
            throw ValidationError("species '" + list_[i].name + "': charge must be nonzero");
        for (std::size_t j = 0; j < i; ++j)
            if (list_[j].id == list_[i].id)
                throw ValidationError("species table: duplicate id " +
                                      std::to_string(list_[i].id));
    }
}

const Species& SpeciesTable::by_id(int id) const {
    for (const auto& s : list_)
        if (s.id == id) return s;
    throw ValidationError("species table: unknown id " + std::to_string(id));
}

bool SpeciesTable::has(int id) const {
    for (const auto& s : list_)
        if (s.id == id) return true;
    return false;
}

SpeciesTable SpeciesTable::default_table() {
    return SpeciesTable({{1, "CF3+", 69.0, 1}, {2, "COCH3+", 43.0, 1}, {3, "CF2+", 50.0, 1}});
}

double DetectorCalibration::t0_ns(const Species& s) const {
    return tof_base_ns * std::sqrt(s.mass_u / static_cast<double>(std::abs(s.charge)));
}

void DetectorCalibration::validate() const {
    if (cx_mm_per_au == 0.0 || cy_mm_per_au == 0.0 || ct_ns_per_au == 0.0)
        throw ValidationError("calibration: momentum map coefficients must be nonzero");
    if (!(tof_base_ns > 0.0) || !(tof_window_ns > 0.0))
        throw ValidationError("calibration: time-of-flight parameters must be positive");
}

std::array<double, 3> momentum_to_detector(const std::array<double, 3>& p, const Species& s,
                                           const DetectorCalibration& calib) {
    return {calib.cx_mm_per_au * p[0], calib.cy_mm_per_au * p[1],
            calib.t0_ns(s) + calib.ct_ns_per_au * p[2]};
}

std::array<double, 3> reconstruct_momentum(const std::array<double, 3>& xyt, const Species& s,
                                           const DetectorCalibration& calib) {
    return {xyt[0] / calib.cx_mm_per_au, xyt[1] / calib.cy_mm_per_au,
            (xyt[2] - calib.t0_ns(s)) / calib.ct_ns_per_au};
}

const Species& assign_species(double t_ns, const SpeciesTable& table,
                              const DetectorCalibration& calib) {
    for (const auto& s : table.list())
        if (std::abs(t_ns - calib.t0_ns(s)) < calib.tof_window_ns) return s;
    throw NumericError("unassigned hit: time of flight " + std::to_string(t_ns) +
                       " ns falls in no species window");
}

double pair_ker_from_momentum(double p_au, double mass_a_u, double mass_b_u) {
    const double ma = units::dalton_to_me(mass_a_u);
    const double mb = units::dalton_to_me(mass_b_u);
    const double mu = ma * mb / (ma + mb);
    return units::hartree_to_ev(p_au * p_au / (2.0 * mu));
}

double pair_momentum_from_ker(double ker_ev, double mass_a_u, double mass_b_u) {
    const double ma = units::dalton_to_me(mass_a_u);
    const double mb = units::dalton_to_me(mass_b_u);
    const double mu = ma * mb / (ma + mb);
    return std::sqrt(2.0 * mu * units::ev_to_hartree(ker_ev));
}

double YieldMap::integrated(std::size_t point) const {
    double s = 0.0;
    for (const double y : points[point].yield) s += y;
    return s;
}

double YieldMap::max_integrated() const {
    double m = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) m = std::max(m, integrated(i));
    return m;
}

void EventGenParams::validate() const {
    if (shots_per_point < 1) throw ValidationError("events: shots_per_point must be >= 1");
    if (!(pair_prob >= 0.0 && pair_prob <= 1.0))
        throw ValidationError("events: pair_prob must be in [0, 1]");
    for (const auto& [id, rate] : background_rates)
        if (rate < 0.0)
            throw ValidationError("events: negative background rate for species " +
                                  std::to_string(id));
    if (!(background_sigma_p > 0.0))
        throw ValidationError("events: background momentum spread must be positive");
}

namespace {

struct PointSampling {
    double pair_prob = 0.0;
    std::vector<double> cdf;  // cumulative yield per bin; empty if point has none
};

IonEvent make_ion(std::int64_t shot, const Species& s, std::array<double, 3> p,
                  const DetectorCalibration& calib, const EventGenParams& prm,
                  RngStream& rng) {
    std::array<double, 3> xyt = momentum_to_detector(p, s, calib);
    if (prm.blur_xy_mm > 0.0) {
        xyt[0] += prm.blur_xy_mm * rng.normal();
        xyt[1] += prm.blur_xy_mm * rng.normal();
    }
    if (prm.blur_t_ns > 0.0) xyt[2] += prm.blur_t_ns * rng.normal();
    if (prm.blur_xy_mm > 0.0 || prm.blur_t_ns > 0.0)
        p = reconstruct_momentum(xyt, s, calib);  // keep hit and momentum consistent
    return IonEvent{shot, s.id, p, xyt[0], xyt[1], xyt[2]};
}

}  // namespace

std::vector<ShotRecord> sample_pair_events(const YieldMap& map, const SpeciesTable& table,
                                           const DetectorCalibration& calib,
                                           const EventGenParams& params, int threads) {
    params.validate();
    calib.validate();
    if (map.points.empty()) throw ValidationError("events: yield map has no scan points");
    const Species& sa = table.by_id(params.species_a);
    const Species& sb = table.by_id(params.species_b);
    for (const auto& [id, rate] : params.background_rates) {
        (void)rate;
        table.by_id(id);  // throws for unknown species
    }

    const double max_int = map.max_integrated();
    if (!(max_int > 0.0)) throw ValidationError("events: yield map is identically zero");

    // Per-point KER cumulative distribution and effective pair probability.
    std::vector<PointSampling> sampling(map.points.size());
    for (std::size_t i = 0; i < map.points.size(); ++i) {
        const double total = map.integrated(i);
        auto& ps = sampling[i];
        if (total > 0.0) {
            ps.pair_prob = params.pair_prob *
                           (params.modulate_pair_prob ? total / max_int : 1.0);
            ps.cdf.resize(map.bins.size());
            double acc = 0.0;
            for (std::size_t b = 0; b < map.bins.size(); ++b) {
                acc += std::max(0.0, map.points[i].yield[b]);
                ps.cdf[b] = acc / total;
            }
        }
    }

    const std::int64_t per_point = params.shots_per_point;
    const std::size_t n_shots = map.points.size() * static_cast<std::size_t>(per_point);
    std::vector<ShotRecord> shots(n_shots);

    parallel_chunks(n_shots, kShotChunk, threads, [&](std::size_t chunk, std::size_t begin,
                                                      std::size_t end) {
        RngStream rng = RngStream::substream(params.seed, chunk);
        for (std::size_t s = begin; s < end; ++s) {
            const std::size_t point = s / static_cast<std::size_t>(per_point);
            const auto& pt = map.points[point];
            const auto& ps = sampling[point];
            ShotRecord& shot = shots[s];
            shot.shot_id = static_cast<std::int64_t>(s);
            shot.tau_fs = pt.tau_fs;
            shot.phi = pt.phi;

            if (!ps.cdf.empty() && rng.uniform() < ps.pair_prob) {
                const double u = rng.uniform();
                const std::size_t bin = static_cast<std::size_t>(
                    std::lower_bound(ps.cdf.begin(), ps.cdf.end(), u) - ps.cdf.begin());
                const std::size_t b = std::min(bin, map.bins.size() - 1);
                const double ker =
                    map.bins.lower(b) + rng.uniform() * map.bins.width();
                const double pmag = pair_momentum_from_ker(ker, sa.mass_u, sb.mass_u);
                const auto dir = rng.isotropic_direction();
                const std::array<double, 3> pa{pmag * dir[0], pmag * dir[1], pmag * dir[2]};
                const std::array<double, 3> pb{-pa[0], -pa[1], -pa[2]};
                shot.ions.push_back(make_ion(shot.shot_id, sa, pa, calib, params, rng));
                shot.ions.push_back(make_ion(shot.shot_id, sb, pb, calib, params, rng));
            }

            for (const auto& [id, rate] : params.background_rates) {
                const Species& sp = table.by_id(id);
                const long count = rng.poisson(rate);
                for (long k = 0; k < count; ++k) {
                    const std::array<double, 3> p{params.background_sigma_p * rng.normal(),
                                                  params.background_sigma_p * rng.normal(),
                                                  params.background_sigma_p * rng.normal()};
                    shot.ions.push_back(make_ion(shot.shot_id, sp, p, calib, params, rng));
                }
            }
        }
    });
    return shots;
}

namespace {

std::string species_header(const SpeciesTable& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.list().size(); ++i) {
        const auto& s = table.list()[i];
        if (i) os << ';';
        os << s.id << ':' << s.name << ':' << format_full(s.mass_u) << ':' << s.charge;
    }
    return os.str();
}

std::string calib_header(const DetectorCalibration& c) {
    std::ostringstream os;
    os << format_full(c.cx_mm_per_au) << ':' << format_full(c.cy_mm_per_au) << ':'
       << format_full(c.ct_ns_per_au) << ':' << format_full(c.tof_base_ns) << ':'
       << format_full(c.tof_window_ns);
    return os.str();
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_events(const std::string& path, const std::vector<ShotRecord>& shots,
                  const SpeciesTable& table, const DetectorCalibration& calib,
                  const std::vector<std::pair<std::string, std::string>>& extra_header) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << "# format = phaselock-events-1\n";
    for (const auto& [k, v] : extra_header) out << "# " << k << " = " << v << "\n";
    out << "# species = " << species_header(table) << "\n";
    out << "# calibration = " << calib_header(calib) << "\n";

    // Scan points with contiguous shot-id ranges let a reader reproduce
    // ion-less shots, which carry statistical weight in covariance maps.
    struct PointRange {
        double tau, phi;
        std::int64_t first, count;
    };
    std::vector<PointRange> ranges;
    for (const auto& s : shots) {
        if (!ranges.empty() && ranges.back().tau == s.tau_fs && ranges.back().phi == s.phi &&
            ranges.back().first + ranges.back().count == s.shot_id) {
            ++ranges.back().count;
        } else {
            ranges.push_back({s.tau_fs, s.phi, s.shot_id, 1});
        }
    }
    out << "# points = " << ranges.size() << "\n";
    for (const auto& r : ranges)
        out << "# point = " << format_full(r.tau) << ':' << format_full(r.phi) << ':' << r.first
            << ':' << r.count << "\n";
    out << "# columns = shot_id delay_fs phase_rad species_id x_mm y_mm t_ns\n";
    for (const auto& s : shots) {
        for (const auto& ion : s.ions) {
            out << s.shot_id << ' ' << format_full(s.tau_fs) << ' ' << format_full(s.phi) << ' '
                << ion.species_id << ' ' << format_full(ion.x_mm) << ' ' << format_full(ion.y_mm)
                << ' ' << format_full(ion.t_ns) << "\n";
        }
    }
    out.flush();
    if (!out) throw NumericError("write failed: " + path);
}

struct EventStreamReader::Impl {
    std::ifstream in;
    std::string path;
    long line_no = 0;
    SpeciesTable species;
    DetectorCalibration calib;
    struct PointRange {
        double tau, phi;
        std::int64_t first, count;
    };
    std::vector<PointRange> ranges;
    std::int64_t total = 0;
    std::int64_t next_shot = 0;
    bool have_pending = false;
    IonEvent pending;
    double pending_tau = 0.0, pending_phi = 0.0;

    const PointRange* range_of(std::int64_t shot) const {
        for (const auto& r : ranges)
            if (shot >= r.first && shot < r.first + r.count) return &r;
        return nullptr;
    }

    bool read_row() {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#' || line == "\r") continue;
            const auto f = split_fields(line);
            if (f.size() != 7)
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": expected 7 fields, got " + std::to_string(f.size()));
            pending.shot_id = parse_int_field(f[0], path, line_no);
            pending_tau = parse_double_field(f[1], path, line_no);
            pending_phi = parse_double_field(f[2], path, line_no);
            pending.species_id =
                static_cast<int>(parse_int_field(f[3], path, line_no));
            pending.x_mm = parse_double_field(f[4], path, line_no);
            pending.y_mm = parse_double_field(f[5], path, line_no);
            pending.t_ns = parse_double_field(f[6], path, line_no);
            if (!species.has(pending.species_id))
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": unknown species id " +
                                      std::to_string(pending.species_id));
            pending.p = reconstruct_momentum({pending.x_mm, pending.y_mm, pending.t_ns},
                                             species.by_id(pending.species_id), calib);
            have_pending = true;
            return true;
        }
        return false;
    }
};

EventStreamReader::EventStreamReader(const std::string& path) : impl_(new Impl) {
    impl_->in.open(path);
    impl_->path = path;
    if (!impl_->in) throw ValidationError("cannot open: " + path);

    // Header block: everything up to the columns line.
    std::string line;
    std::vector<Species> specs;
    bool have_format = false;
    while (impl_->in.peek() == '#' && std::getline(impl_->in, line)) {
        ++impl_->line_no;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(1, eq - 1);
        std::string value = line.substr(eq + 1);
        const auto trim = [](std::string& s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.pop_back();
        };
        trim(key);
        trim(value);
        if (key == "format") {
            if (value != "phaselock-events-1")
                throw ValidationError(path + ": unsupported event file format '" + value + "'");
            have_format = true;
        } else if (key == "species") {
            for (const auto& entry : split_on(value, ';')) {
                const auto parts = split_on(entry, ':');
                if (parts.size() != 4)
                    throw ValidationError(path + ": malformed species entry '" + entry + "'");
                specs.push_back({static_cast<int>(std::stol(parts[0])), parts[1],
                                 std::stod(parts[2]), static_cast<int>(std::stol(parts[3]))});
            }
        } else if (key == "calibration") {
            const auto parts = split_on(value, ':');
            if (parts.size() != 5)
                throw ValidationError(path + ": malformed calibration header");
            impl_->calib.cx_mm_per_au = std::stod(parts[0]);
            impl_->calib.cy_mm_per_au = std::stod(parts[1]);
            impl_->calib.ct_ns_per_au = std::stod(parts[2]);
            impl_->calib.tof_base_ns = std::stod(parts[3]);
            impl_->calib.tof_window_ns = std::stod(parts[4]);
        } else if (key == "point") {
            const auto parts = split_on(value, ':');
            if (parts.size() != 4)
                throw ValidationError(path + ": malformed point header");
            impl_->ranges.push_back({std::stod(parts[0]), std::stod(parts[1]),
                                     std::stoll(parts[2]), std::stoll(parts[3])});
        }
    }
    if (!have_format) throw ValidationError(path + ": missing event file format header");
    impl_->species = SpeciesTable(std::move(specs));
    impl_->calib.validate();
    for (const auto& r : impl_->ranges)
        impl_->total = std::max(impl_->total, r.first + r.count);
}

EventStreamReader::~EventStreamReader() = default;
EventStreamReader::EventStreamReader(EventStreamReader&&) noexcept = default;
EventStreamReader& EventStreamReader::operator=(EventStreamReader&&) noexcept = default;

const SpeciesTable& EventStreamReader::species() const { return impl_->species; }
const DetectorCalibration& EventStreamReader::calibration() const { return impl_->calib; }
std::int64_t EventStreamReader::total_shots() const { return impl_->total; }

std::optional<ShotRecord> EventStreamReader::next_shot() {
    Impl& im = *impl_;
    if (!im.have_pending) im.read_row();
    if (im.next_shot >= im.total) return std::nullopt;

    ShotRecord shot;
    shot.shot_id = im.next_shot;
    if (const auto* r = im.range_of(im.next_shot)) {
        shot.tau_fs = r->tau;
        shot.phi = r->phi;
    }
    while (im.have_pending && im.pending.shot_id == im.next_shot) {
        shot.tau_fs = im.pending_tau;
        shot.phi = im.pending_phi;
        shot.ions.push_back(im.pending);
        im.have_pending = false;
        im.read_row();
    }
    if (im.have_pending && im.pending.shot_id < im.next_shot)
        throw ValidationError(im.path + ": shot ids out of order near line " +
                              std::to_string(im.line_no));
    ++im.next_shot;
    return shot;
}

EventFile read_events(const std::string& path) {
    EventStreamReader reader(path);
    EventFile out;
    out.species = reader.species();
    out.calibration = reader.calibration();
    while (auto s = reader.next_shot()) out.shots.push_back(std::move(*s));
    return out;
}

}  // namespace phaselock
