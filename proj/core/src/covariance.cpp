#include "phaselock/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "phaselock/columnar.hpp"
#include "phaselock/errors.hpp"
#include "phaselock/parallel.hpp"
#include "phaselock/units.hpp"

namespace phaselock {

double pair_ker(const std::array<double, 3>& p_a, const std::array<double, 3>& p_b,
                double mass_a_u, double mass_b_u) {
    const double ma = units::dalton_to_me(mass_a_u);
    const double mb = units::dalton_to_me(mass_b_u);
    const double pa2 = p_a[0] * p_a[0] + p_a[1] * p_a[1] + p_a[2] * p_a[2];
    const double pb2 = p_b[0] * p_b[0] + p_b[1] * p_b[1] + p_b[2] * p_b[2];
    return units::hartree_to_ev(pa2 / (2.0 * ma) + pb2 / (2.0 * mb));
}

bool momentum_gate(const std::array<double, 3>& p_a, const std::array<double, 3>& p_b,
                   double epsilon) {
    if (!(epsilon > 0.0)) throw ValidationError("momentum_gate: epsilon must be positive");
    const double sx = p_a[0] + p_b[0];
    const double sy = p_a[1] + p_b[1];
    const double sz = p_a[2] + p_b[2];
    return sx * sx + sy * sy + sz * sz < epsilon * epsilon;
}

PairStatsAccumulator::PairStatsAccumulator(std::vector<std::pair<double, double>> scan_points,
                                           KerBinning bins, int species_a, int species_b,
                                           double epsilon)
    : points_(std::move(scan_points)),
      bins_(bins),
      species_a_(species_a),
      species_b_(species_b),
      epsilon_(epsilon) {
    if (points_.empty()) throw ValidationError("covariance: no scan points");
    if (!(epsilon > 0.0)) throw ValidationError("covariance: epsilon must be positive");
    cells_.assign(points_.size() * bins_.size(), {});
    nshots_.assign(points_.size(), 0);
}

std::size_t PairStatsAccumulator::point_index(double tau, double phi) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i].first == tau && points_[i].second == phi) return i;
    throw ValidationError("covariance: shot at unknown scan point (tau=" + std::to_string(tau) +
                          ", phi=" + std::to_string(phi) + ")");
}

void PairStatsAccumulator::add_shot(const ShotRecord& shot, double mass_a_u, double mass_b_u) {
    const std::size_t point = point_index(shot.tau_fs, shot.phi);
    ++nshots_[point];
    ++total_shots_;

    // Enumerate every cross-species candidate pair that conserves momentum.
    // Real shots carry several ions; the covariance subtraction removes the
    // false-combination baseline that direct counting keeps.
    struct Member {
        std::size_t bin;
        std::uint32_t ion;
    };
    std::vector<Member> a_members, b_members;
    std::vector<std::pair<std::size_t, double>> pair_bins;  // (bin, 1) per gated pair
    for (std::uint32_t ia = 0; ia < shot.ions.size(); ++ia) {
        if (shot.ions[ia].species_id != species_a_) continue;
        for (std::uint32_t ib = 0; ib < shot.ions.size(); ++ib) {
            if (shot.ions[ib].species_id != species_b_) continue;
            if (!momentum_gate(shot.ions[ia].p, shot.ions[ib].p, epsilon_)) continue;
            const double ker = pair_ker(shot.ions[ia].p, shot.ions[ib].p, mass_a_u, mass_b_u);
            const auto bin = bins_.index_of(ker);
            if (!bin) continue;
            a_members.push_back({*bin, ia});
            b_members.push_back({*bin, ib});
            pair_bins.push_back({*bin, 1.0});
        }
    }
    if (pair_bins.empty()) return;

    const auto count_distinct = [](std::vector<Member>& m, std::vector<std::pair<std::size_t, double>>& out) {
        std::sort(m.begin(), m.end(), [](const Member& x, const Member& y) {
            return x.bin != y.bin ? x.bin < y.bin : x.ion < y.ion;
        });
        for (std::size_t i = 0; i < m.size();) {
            std::size_t j = i;
            double distinct = 0.0;
            std::uint32_t last_ion = ~0u;
            for (; j < m.size() && m[j].bin == m[i].bin; ++j) {
                if (m[j].ion != last_ion) {
                    distinct += 1.0;
                    last_ion = m[j].ion;
                }
            }
            out.push_back({m[i].bin, distinct});
            i = j;
        }
    };
    std::vector<std::pair<std::size_t, double>> u_bins, v_bins;
    count_distinct(a_members, u_bins);
    count_distinct(b_members, v_bins);

    // Merge u and v per bin (either may be zero in a bin the other hit —
    // cannot happen here since both sides of each pair land in the same bin,
    // but keep the merge general).
    Cell* row = cells_.data() + point * bins_.size();
    auto iu = u_bins.begin();
    auto iv = v_bins.begin();
    while (iu != u_bins.end() || iv != v_bins.end()) {
        std::size_t bin;
        double u = 0.0, v = 0.0;
        if (iv == v_bins.end() || (iu != u_bins.end() && iu->first < iv->first)) {
            bin = iu->first;
            u = (iu++)->second;
        } else if (iu == u_bins.end() || iv->first < iu->first) {
            bin = iv->first;
            v = (iv++)->second;
        } else {
            bin = iu->first;
            u = (iu++)->second;
            v = (iv++)->second;
        }
        Cell& c = row[bin];
        c.su += u;
        c.sv += v;
        c.suv += u * v;
        c.su2 += u * u;
        c.sv2 += v * v;
        c.su2v += u * u * v;
        c.suv2 += u * v * v;
        c.su2v2 += u * u * v * v;
    }
    for (const auto& [bin, one] : pair_bins) {
        row[bin].pairs += one;
        total_pairs_ += one;
    }
}

void PairStatsAccumulator::merge(const PairStatsAccumulator& other) {
    if (other.cells_.size() != cells_.size())
        throw ValidationError("covariance: merging incompatible accumulators");
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        Cell& c = cells_[i];
        const Cell& o = other.cells_[i];
        c.su += o.su;
        c.sv += o.sv;
        c.suv += o.suv;
        c.su2 += o.su2;
        c.sv2 += o.sv2;
        c.su2v += o.su2v;
        c.suv2 += o.suv2;
        c.su2v2 += o.su2v2;
        c.pairs += o.pairs;
    }
    for (std::size_t i = 0; i < nshots_.size(); ++i) nshots_[i] += other.nshots_[i];
    total_pairs_ += other.total_pairs_;
    total_shots_ += other.total_shots_;
}

std::int64_t PairStatsAccumulator::total_shots() const { return total_shots_; }

double PairStatsAccumulator::mean_pairs_per_shot() const {
    return total_shots_ == 0 ? 0.0 : total_pairs_ / static_cast<double>(total_shots_);
}

namespace {

void fill_axis(CovarianceMap& map, ScanAxis axis,
               const std::vector<std::pair<double, double>>& points) {
    map.axis = axis;
    for (const auto& [tau, phi] : points) {
        map.scan_tau.push_back(tau);
        map.scan_phi.push_back(phi);
        map.scan_values.push_back(axis == ScanAxis::delay ? tau : phi);
    }
}

}  // namespace

CovarianceMap PairStatsAccumulator::finalize_covariance(ScanAxis axis) const {
    CovarianceMap map;
    fill_axis(map, axis, points_);
    map.bins = bins_;
    map.shots = nshots_;
    map.value.resize(cells_.size());
    map.sigma.resize(cells_.size());
    for (std::size_t p = 0; p < points_.size(); ++p) {
        const double n = static_cast<double>(nshots_[p]);
        if (nshots_[p] < 2)
            throw ValidationError("covariance: scan point " + std::to_string(p) +
                                  " has fewer than 2 shots");
        const double m = n - 1.0;
        for (std::size_t b = 0; b < bins_.size(); ++b) {
            const Cell& c = cells_[p * bins_.size() + b];
            const double cov = c.suv / n - (c.su / n) * (c.sv / n);

            // Delete-one-shot jackknife. With totals P = suv, A = su, B = sv
            // the leave-s-out covariance is linear in (u_s, v_s, u_s v_s):
            //   c_s = k0 + k1 u_s + k2 v_s + k3 u_s v_s
            // so its first two moments come from the stored sums.
            const double k0 = c.suv / m - c.su * c.sv / (m * m);
            const double k1 = c.sv / (m * m);
            const double k2 = c.su / (m * m);
            const double k3 = -(1.0 / m + 1.0 / (m * m));
            const double sum_c = n * k0 + k1 * c.su + k2 * c.sv + k3 * c.suv;
            const double sum_c2 = n * k0 * k0 + k1 * k1 * c.su2 + k2 * k2 * c.sv2 +
                                  k3 * k3 * c.su2v2 + 2.0 * k0 * k1 * c.su +
                                  2.0 * k0 * k2 * c.sv + 2.0 * k0 * k3 * c.suv +
                                  2.0 * k1 * k2 * c.suv + 2.0 * k1 * k3 * c.su2v +
                                  2.0 * k2 * k3 * c.suv2;
            const double var_jack = std::max(0.0, (m / n) * (sum_c2 - sum_c * sum_c / n));
            map.value[p * bins_.size() + b] = cov;
            map.sigma[p * bins_.size() + b] = std::sqrt(var_jack);
        }
    }
    return map;
}

CovarianceMap PairStatsAccumulator::finalize_coincidence(ScanAxis axis) const {
    CovarianceMap map;
    fill_axis(map, axis, points_);
    map.bins = bins_;
    map.shots = nshots_;
    map.value.resize(cells_.size());
    map.sigma.resize(cells_.size());
    for (std::size_t p = 0; p < points_.size(); ++p) {
        const double n = static_cast<double>(nshots_[p]);
        if (nshots_[p] < 1)
            throw ValidationError("coincidence: empty scan point " + std::to_string(p));
        for (std::size_t b = 0; b < bins_.size(); ++b) {
            const Cell& c = cells_[p * bins_.size() + b];
            map.value[p * bins_.size() + b] = c.pairs / n;
            // Poisson-style error on the mean count.
            map.sigma[p * bins_.size() + b] = std::sqrt(std::max(c.pairs, 1.0)) / n;
        }
    }
    map.rate_warning = mean_pairs_per_shot() > 1.0;
    return map;
}

namespace {

std::vector<std::pair<double, double>> collect_points(std::span<const ShotRecord> shots) {
    std::vector<std::pair<double, double>> points;
    std::map<std::pair<double, double>, std::size_t> seen;
    for (const auto& s : shots) {
        const auto key = std::make_pair(s.tau_fs, s.phi);
        if (seen.emplace(key, points.size()).second) points.push_back(key);
    }
    if (points.empty()) throw ValidationError("covariance: no shots");
    return points;
}

PairStatsAccumulator accumulate(std::span<const ShotRecord> shots, const SpeciesTable& table,
                                int species_a, int species_b, const KerBinning& bins,
                                double epsilon, int threads) {
    const double mass_a = table.by_id(species_a).mass_u;
    const double mass_b = table.by_id(species_b).mass_u;
    auto points = collect_points(shots);

    PairStatsAccumulator total(points, bins, species_a, species_b, epsilon);
    if (threads <= 1) {
        for (const auto& s : shots) total.add_shot(s, mass_a, mass_b);
        return total;
    }

    // Slot-per-worker partials; every sum is an exact integer count, so the
    // combined result is identical for any chunk-to-slot assignment.
    const int nslots = std::max(1, std::min(threads, 8));
    std::vector<PairStatsAccumulator> partials(
        static_cast<std::size_t>(nslots),
        PairStatsAccumulator(points, bins, species_a, species_b, epsilon));
    std::vector<std::mutex> locks(static_cast<std::size_t>(nslots));
    parallel_chunks(shots.size(), 8192, threads,
                    [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                        const std::size_t slot = chunk % static_cast<std::size_t>(nslots);
                        std::lock_guard<std::mutex> lock(locks[slot]);
                        for (std::size_t i = begin; i < end; ++i)
                            partials[slot].add_shot(shots[i], mass_a, mass_b);
                    });
    for (const auto& p : partials) total.merge(p);
    return total;
}

}  // namespace

CovarianceMap covariance_map(std::span<const ShotRecord> shots, const SpeciesTable& table,
                             int species_a, int species_b, const KerBinning& bins,
                             ScanAxis axis, double epsilon, int threads) {
    return accumulate(shots, table, species_a, species_b, bins, epsilon, threads)
        .finalize_covariance(axis);
}

CovarianceMap coincidence_oracle(std::span<const ShotRecord> shots, const SpeciesTable& table,
                                 int species_a, int species_b, const KerBinning& bins,
                                 ScanAxis axis, double epsilon) {
    return accumulate(shots, table, species_a, species_b, bins, epsilon, 1)
        .finalize_coincidence(axis);
}

CovarianceMap covariance_map_stream(EventStreamReader& reader, int species_a, int species_b,
                                    const KerBinning& bins, ScanAxis axis, double epsilon) {
    const double mass_a = reader.species().by_id(species_a).mass_u;
    const double mass_b = reader.species().by_id(species_b).mass_u;

    // Scan points are discovered on the fly (one single-point accumulator
    // each, first-seen order); memory stays at bins x points for any shot
    // count.
    std::vector<std::pair<double, double>> points;
    std::map<std::pair<double, double>, std::size_t> index;
    std::vector<PairStatsAccumulator> per_point;
    while (auto s = reader.next_shot()) {
        const auto key = std::make_pair(s->tau_fs, s->phi);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, per_point.size()).first;
            per_point.emplace_back(std::vector<std::pair<double, double>>{key}, bins, species_a,
                                   species_b, epsilon);
            points.push_back(key);
        }
        per_point[it->second].add_shot(*s, mass_a, mass_b);
    }
    if (per_point.empty()) throw ValidationError("covariance: event stream has no shots");

    CovarianceMap map;
    map.bins = bins;
    fill_axis(map, axis, points);
    for (auto& acc : per_point) {
        CovarianceMap m = acc.finalize_covariance(axis);
        map.value.insert(map.value.end(), m.value.begin(), m.value.end());
        map.sigma.insert(map.sigma.end(), m.sigma.begin(), m.sigma.end());
        map.shots.insert(map.shots.end(), m.shots.begin(), m.shots.end());
    }
    return map;
}

void write_covariance_map(const std::string& path, const CovarianceMap& map,
                          const std::vector<std::pair<std::string, std::string>>& header) {
    std::vector<std::pair<std::string, std::string>> h = header;
    h.emplace_back("format", "phaselock-covmap-1");
    h.emplace_back("scan_axis", map.axis == ScanAxis::delay ? "delay" : "phase");
    h.emplace_back("ker_min_ev", format_full(map.bins.e_min()));
    h.emplace_back("ker_max_ev", format_full(map.bins.e_max()));
    h.emplace_back("ker_bins", std::to_string(map.bins.size()));
    TableWriter w(path,
                  {"scan_value", "tau_fs", "phi_rad", "ker_center_ev", "covariance",
                   "sigma_jackknife", "n_shots"},
                  h);
    for (std::size_t p = 0; p < map.scan_values.size(); ++p)
        for (std::size_t b = 0; b < map.bins.size(); ++b)
            w.row({map.scan_values[p], map.scan_tau[p], map.scan_phi[p], map.bins.center(b),
                   map.at(p, b), map.sigma_at(p, b), static_cast<double>(map.shots[p])});
}

CovarianceMap read_covariance_map(const std::string& path) {
    const Table t = read_table(path);
    CovarianceMap map;
    const std::string axis = t.header_at("scan_axis");
    map.axis = axis == "phase" ? ScanAxis::phase : ScanAxis::delay;
    map.bins = KerBinning(std::stod(t.header_at("ker_min_ev")),
                          std::stod(t.header_at("ker_max_ev")),
                          std::stoul(t.header_at("ker_bins")));
    const std::size_t nb = map.bins.size();
    if (t.rows.empty() || t.rows.size() % nb != 0)
        throw ValidationError(path + ": row count is not a multiple of the bin count");
    const std::size_t iv = t.column_index("scan_value");
    const std::size_t itau = t.column_index("tau_fs");
    const std::size_t iphi = t.column_index("phi_rad");
    const std::size_t ic = t.column_index("covariance");
    const std::size_t is = t.column_index("sigma_jackknife");
    const std::size_t in = t.column_index("n_shots");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (r % nb == 0) {
            map.scan_values.push_back(t.rows[r][iv]);
            map.scan_tau.push_back(t.rows[r][itau]);
            map.scan_phi.push_back(t.rows[r][iphi]);
            map.shots.push_back(static_cast<std::int64_t>(t.rows[r][in]));
        }
        map.value.push_back(t.rows[r][ic]);
        map.sigma.push_back(t.rows[r][is]);
    }
    return map;
}

}  // namespace phaselock
