#include "annealbench/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "annealbench/errors.hpp"
#include "annealbench/rng.hpp"

namespace annealbench {

namespace {

inline void require_fugacity(double lambda) {
    if (!(lambda >= 1.0)) throw Error(ErrorKind::InvalidFugacity, fmt::format("fugacity {} outside [1, inf]", lambda));
}

inline bool accept_removal(double zeta, double lambda) { return !std::isinf(lambda) && zeta <= 1.0 / lambda; }

inline bool has_occupied_neighbor(const Graph& g, const IndependentSetState& st, VertexId v) {
    for (VertexId w : g.neighbors(v))
        if (st.contains(w)) return true;
    return false;
}

/// Bookkeeping shared by the discrete and continuous runs: side counts,
/// running maximum, hitting times, watch vertex, cloud loads, snapshots.
class Bookkeeper {
public:
    Bookkeeper(const Graph& g, const RecorderConfig& rec, std::uint64_t horizon_steps)
        : g_(g), rec_(rec), state(g.num_vertices()) {
        thresholds_ = rec.thresholds;
        std::sort(thresholds_.begin(), thresholds_.end());
        thresholds_.erase(std::unique(thresholds_.begin(), thresholds_.end()), thresholds_.end());
        record.hitting_times.reserve(thresholds_.size());
        for (std::size_t thr : thresholds_) record.hitting_times.push_back({thr, std::nullopt});
        while (next_threshold_ < thresholds_.size() && thresholds_[next_threshold_] == 0)
            record.hitting_times[next_threshold_++].step = 0;
        if (rec.track_clouds && g.has_groups()) clouds = CloudTracker(g.groups());
        every_ = rec.snapshot_every ? rec.snapshot_every : std::max<std::uint64_t>(1, (horizon_steps + 999) / 1000);
        probes_ = rec.probe_steps;
        std::sort(probes_.begin(), probes_.end());
        next_mark_ = next_mark_after(0);
    }

    void added(VertexId v, std::uint64_t t) {
        state.insert(v);
        count_side(v, +1);
        if (clouds.enabled()) clouds.on_add(v);
        if (rec_.watch_vertex && *rec_.watch_vertex == v && !record.root_added) {
            record.root_added = true;
            record.root_first_step = t;
        }
        const std::size_t size = state.size();
        if (size > record.max_size) {
            record.max_size = size;
            record.step_of_max = t;
            while (next_threshold_ < thresholds_.size() && thresholds_[next_threshold_] <= size)
                record.hitting_times[next_threshold_++].step = t;
            if (rec_.keep_best_set) record.best_set = state.members();
        }
    }

    void removed(VertexId v) {
        state.erase(v);
        count_side(v, -1);
        if (clouds.enabled()) clouds.on_remove(v);
    }

    bool reached_stop() const noexcept { return rec_.stop_at_size && state.size() >= *rec_.stop_at_size; }

    HistoryDigest digest(std::uint64_t t) const {
        return {t, state.size(), record.max_size, record.step_of_max, occ_left, occ_right, state.occupancy()};
    }

    /// Called after step t; records probes and periodic snapshots.
    void after_step(std::uint64_t t) {
        if (t != next_mark_) return;
        while (next_probe_ < probes_.size() && probes_[next_probe_] == t) {
            record.probes.push_back(snapshot(t));
            ++next_probe_;
        }
        if (t % every_ == 0) periodic(t);
        next_mark_ = next_mark_after(t);
    }

    void finish(std::uint64_t steps) {
        record.steps = steps;
        if (steps % every_ != 0 || steps == 0) periodic(steps);
        record.final_size = state.size();
        record.final_occ_left = occ_left;
        record.final_occ_right = occ_right;
        record.deload_final = clouds.enabled() ? clouds.deload() : 0;
        if (rec_.keep_final_set) record.final_set = state.members();
        if (rec_.keep_best_set && record.max_size == 0) record.best_set.clear();
    }

    Snapshot snapshot(std::uint64_t t) const { return {t, state.size(), occ_left, occ_right}; }

    const Graph& g_;
    const RecorderConfig& rec_;
    IndependentSetState state;
    TrialRecord record;
    CloudTracker clouds;
    std::size_t occ_left = 0;
    std::size_t occ_right = 0;

private:
    void count_side(VertexId v, int delta) {
        const Side s = g_.side(v);
        if (s == Side::left) occ_left += static_cast<std::size_t>(delta);
        else if (s == Side::right) occ_right += static_cast<std::size_t>(delta);
    }

    void periodic(std::uint64_t t) {
        if (rec_.check_independence && !state_is_independent(g_, state))
            throw Error(ErrorKind::NotIndependent, fmt::format("occupied set spans an edge at step {}", t));
        if (rec_.keep_snapshots) record.snapshots.push_back(snapshot(t));
        if (clouds.enabled()) record.deload_series.emplace_back(t, clouds.deload());
    }

    std::uint64_t next_mark_after(std::uint64_t t) const {
        std::uint64_t next = (t / every_ + 1) * every_;
        if (next_probe_ < probes_.size()) next = std::min(next, probes_[next_probe_]);
        return next;
    }

    std::vector<std::size_t> thresholds_;
    std::size_t next_threshold_ = 0;
    std::uint64_t every_ = 1;
    std::vector<std::uint64_t> probes_;
    std::size_t next_probe_ = 0;
    std::uint64_t next_mark_ = 0;
};

}  // namespace

std::optional<std::uint64_t> TrialRecord::hit_step(std::size_t threshold) const {
    for (const auto& h : hitting_times)
        if (h.threshold == threshold) return h.step;
    if (threshold == 0) return 0;
    return std::nullopt;
}

CloudTracker::CloudTracker(std::span<const std::int64_t> groups) : group_of_(groups) {
    std::int64_t top = -1;
    for (auto c : groups) top = std::max(top, c);
    const auto count = static_cast<std::size_t>(top + 1);
    load_.assign(count, 0);
    loaded_.assign(count, 0);
    deloaded_.assign(count, 0);
}

UpdateOutcome ump_update(IndependentSetState& state, const Graph& g, VertexId v, double zeta, double lambda) {
    require_fugacity(lambda);
    if (state.contains(v)) {
        if (accept_removal(zeta, lambda)) {
            state.erase(v);
            return UpdateOutcome::removed;
        }
        return UpdateOutcome::kept;
    }
    if (has_occupied_neighbor(g, state, v)) return UpdateOutcome::blocked;
    state.insert(v);
    return UpdateOutcome::added;
}

TrialRecord run_ump(const Graph& g, const FugacitySchedule& sched, std::uint64_t T, std::uint64_t seed,
                    const RecorderConfig& rec) {
    const std::size_t n = g.num_vertices();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "UMP on an empty vertex set");
    Bookkeeper book(g, rec, T);
    book.record.seed = seed;
    StreamRng rng(seed);

    const bool constant = sched.kind() == FugacitySchedule::Kind::fixed ||
                          sched.kind() == FugacitySchedule::Kind::infinite;
    const double constant_lambda = constant ? sched.at(std::uint64_t{1}) : 0.0;

    std::uint64_t t = 0;
    while (t < T) {
        ++t;
        const auto v = static_cast<VertexId>(rng.below(n));
        const double zeta = rng.uniform01();
        if (book.state.contains(v)) {
            const double lambda = constant ? constant_lambda : sched.at(book.digest(t));
            require_fugacity(lambda);
            if (accept_removal(zeta, lambda)) book.removed(v);
        } else if (!has_occupied_neighbor(g, book.state, v)) {
            book.added(v, t);
            if (book.reached_stop()) {
                book.after_step(t);
                break;
            }
        }
        book.after_step(t);
    }
    book.finish(t);
    return std::move(book.record);
}

GreedyResult run_randomized_greedy(const Graph& g, std::uint64_t seed) {
    const std::size_t n = g.num_vertices();
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), VertexId{0});
    StreamRng rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    IndependentSetState st(n);
    GreedyResult out;
    std::size_t occ_left = 0, occ_right = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const VertexId v = order[i];
        if (has_occupied_neighbor(g, st, v)) continue;
        st.insert(v);
        out.set.push_back(v);
        out.record.step_of_max = i + 1;
        if (g.side(v) == Side::left) ++occ_left;
        else if (g.side(v) == Side::right) ++occ_right;
    }
    std::sort(out.set.begin(), out.set.end());
    out.record.seed = seed;
    out.record.steps = n;
    out.record.max_size = out.set.size();
    out.record.final_size = out.set.size();
    out.record.final_occ_left = occ_left;
    out.record.final_occ_right = occ_right;
    return out;
}

std::vector<VertexId> run_degree_greedy(const Graph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<std::size_t> degree(n);
    std::set<std::pair<std::size_t, VertexId>> queue;
    for (VertexId v = 0; v < n; ++v) {
        degree[v] = g.degree(v);
        queue.emplace(degree[v], v);
    }
    std::vector<std::uint8_t> removed(n, 0);
    std::vector<VertexId> chosen;
    auto drop = [&](VertexId v) {
        removed[v] = 1;
        queue.erase({degree[v], v});
    };
    while (!queue.empty()) {
        const VertexId v = queue.begin()->second;
        chosen.push_back(v);
        drop(v);
        for (VertexId w : g.neighbors(v)) {
            if (removed[w]) continue;
            drop(w);
            for (VertexId x : g.neighbors(w)) {
                if (removed[x]) continue;
                queue.erase({degree[x], x});
                --degree[x];
                queue.emplace(degree[x], x);
            }
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

WeightedCTConfig clique_blowup_ct_config(const Graph& base, std::size_t ell, double horizon, std::uint64_t max_events) {
    if (!base.has_sides()) throw Error(ErrorKind::NotBipartite, "clique blowup base needs side labels");
    WeightedCTConfig cfg;
    const std::size_t n = base.num_vertices();
    cfg.rate.assign(n, 1.0);
    cfg.multiplier.assign(n, 1.0);
    for (VertexId v = 0; v < n; ++v) {
        if (base.side(v) == Side::left) {
            cfg.rate[v] = static_cast<double>(ell);
            cfg.multiplier[v] = static_cast<double>(ell);
        }
    }
    cfg.horizon = horizon;
    cfg.max_events = max_events;
    return cfg;
}

namespace {

/// Walker/Vose alias table; sample() consumes exactly two draws.
class AliasTable {
public:
    explicit AliasTable(std::span<const double> weights) : prob_(weights.size()), alias_(weights.size()) {
        const std::size_t n = weights.size();
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        std::vector<double> scaled(n);
        std::vector<std::uint32_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] * static_cast<double>(n) / total;
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            const auto s = small.back();
            small.pop_back();
            const auto l = large.back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (auto i : large) prob_[i] = 1.0, alias_[i] = i;
        for (auto i : small) prob_[i] = 1.0, alias_[i] = i;
    }

    VertexId sample(StreamRng& rng) const noexcept {
        const auto column = static_cast<std::uint32_t>(rng.below(prob_.size()));
        const double coin = rng.uniform01();
        return coin < prob_[column] ? column : alias_[column];
    }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

}  // namespace

TrialRecord run_ct_ump(const Graph& base, const WeightedCTConfig& cfg, const FugacitySchedule& sched,
                       std::uint64_t seed, const RecorderConfig& rec) {
    const std::size_t n = base.num_vertices();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "continuous-time UMP on an empty vertex set");
    if (cfg.rate.size() != n || cfg.multiplier.size() != n)
        throw Error(ErrorKind::InvalidArgument, "rate and multiplier vectors must cover every vertex");
    for (VertexId v = 0; v < n; ++v) {
        if (!(cfg.rate[v] > 0.0) || std::isinf(cfg.rate[v]))
            throw Error(ErrorKind::InvalidRate, fmt::format("rate {} at vertex {} is not a positive real", cfg.rate[v], v));
        if (!(cfg.multiplier[v] >= 1.0))
            throw Error(ErrorKind::InvalidArgument, fmt::format("multiplier {} at vertex {} is below 1", cfg.multiplier[v], v));
    }
    const double total_rate = std::accumulate(cfg.rate.begin(), cfg.rate.end(), 0.0);
    const bool timed = !std::isinf(cfg.horizon) || !rec.probe_times.empty();
    const std::uint64_t expected_events = cfg.max_events != std::numeric_limits<std::uint64_t>::max()
                                              ? cfg.max_events
                                              : static_cast<std::uint64_t>(std::min(1e18, total_rate * cfg.horizon));

    Bookkeeper book(base, rec, expected_events);
    book.record.seed = seed;
    const AliasTable table(cfg.rate);
    StreamRng rng(seed);

    std::vector<double> probe_times = rec.probe_times;
    std::sort(probe_times.begin(), probe_times.end());
    std::size_t next_probe = 0;
    std::vector<std::uint8_t> touched(n, 0);
    std::size_t right_touched = 0;
    auto emit_probe = [&](double time, std::uint64_t events) {
        book.record.ct_probes.push_back({time, events, book.occ_left, book.occ_right, right_touched});
    };

    const bool constant = sched.kind() == FugacitySchedule::Kind::fixed ||
                          sched.kind() == FugacitySchedule::Kind::infinite;
    const double constant_lambda = constant ? sched.at(std::uint64_t{1}) : 0.0;

    double now = 0.0;
    bool reached_horizon = false;
    std::uint64_t t = 0;
    while (t < cfg.max_events) {
        const double u = rng.uniform01();
        if (timed) {
            now += -std::log1p(-u) / total_rate;
            while (next_probe < probe_times.size() && probe_times[next_probe] < now) {
                if (probe_times[next_probe] > cfg.horizon) break;
                emit_probe(probe_times[next_probe++], t);
            }
            if (now > cfg.horizon) {
                reached_horizon = true;
                break;
            }
        }
        ++t;
        const VertexId v = table.sample(rng);
        const double zeta = rng.uniform01();
        if (!touched[v]) {
            touched[v] = 1;
            if (base.side(v) == Side::right) ++right_touched;
        }
        if (book.state.contains(v)) {
            const double lambda = constant ? constant_lambda : sched.at(book.digest(t));
            require_fugacity(lambda);
            if (accept_removal(zeta, cfg.multiplier[v] * lambda)) book.removed(v);
        } else if (!has_occupied_neighbor(base, book.state, v)) {
            book.added(v, t);
            if (book.reached_stop()) {
                book.after_step(t);
                break;
            }
        }
        book.after_step(t);
    }
    // Probes between the last event and the horizon see the final state.
    while (reached_horizon && next_probe < probe_times.size() && probe_times[next_probe] <= cfg.horizon)
        emit_probe(probe_times[next_probe++], t);
    book.record.end_time = timed ? std::min(now, cfg.horizon) : 0.0;
    book.finish(t);
    return std::move(book.record);
}

std::vector<VertexId> phi_project(const Graph& blowup, std::span<const VertexId> set, const CliqueMeta& meta) {
    if (blowup.num_vertices() != meta.num_vertices())
        throw Error(ErrorKind::InvalidArgument, "clique layout does not match the blowup graph");
    if (!is_independent(blowup, set)) throw Error(ErrorKind::NotIndependent, "set spans an edge of the blowup");
    std::vector<VertexId> out;
    out.reserve(set.size());
    for (VertexId v : set) out.push_back(meta.project(v));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CouplingReport run_coupled_monotone(const Graph& g, const CouplingSetup& setup, std::span<const VertexId> upper0,
                                    std::span<const VertexId> lower0, const CouplingConfig& cfg) {
    require_fugacity(cfg.lambda);
    const std::size_t n = g.num_vertices();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "coupling on an empty vertex set");

    enum : std::uint8_t { kOutside = 0, kL1 = 1, kR0 = 2 };
    std::vector<std::uint8_t> role(n, kOutside);
    for (VertexId v : setup.l1) {
        if (v >= n) throw Error(ErrorKind::InvalidArgument, "L1 vertex out of range");
        role[v] = kL1;
    }
    for (VertexId v : setup.r0) {
        if (v >= n || role[v] == kL1) throw Error(ErrorKind::InvalidArgument, "R0 vertex out of range or in L1");
        role[v] = kR0;
    }
    for (VertexId u : setup.l1)
        for (VertexId w : g.neighbors(u))
            if (role[w] != kR0) throw Error(ErrorKind::InvalidArgument, "L1 vertex has a neighbor outside R0");
    if (!is_independent(g, upper0)) throw Error(ErrorKind::NotIndependent, "upper start set is not independent");
    if (!is_independent(g, lower0)) throw Error(ErrorKind::NotIndependent, "lower start set is not independent");
    for (VertexId v : lower0)
        if (role[v] == kOutside) throw Error(ErrorKind::InvalidArgument, "lower start set leaves W");

    std::vector<std::uint8_t> upper(n, 0), lower(n, 0);
    for (VertexId v : upper0) upper[v] = 1;
    for (VertexId v : lower0) lower[v] = 1;

    auto bad = [&](VertexId v) {
        return (role[v] == kL1 && lower[v] && !upper[v]) || (role[v] == kR0 && upper[v] && !lower[v]);
    };
    std::size_t bad_count = 0, differ_count = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (role[v] == kOutside) continue;
        bad_count += bad(v);
        differ_count += upper[v] != lower[v];
    }

    // Metropolis update of one process at v; the lower process only sees W.
    auto update = [&](std::vector<std::uint8_t>& occ, bool restricted, VertexId v, double zeta) {
        if (occ[v]) {
            if (accept_removal(zeta, cfg.lambda)) occ[v] = 0;
            return;
        }
        for (VertexId w : g.neighbors(v)) {
            if (restricted && role[w] == kOutside) continue;
            if (occ[w]) return;
        }
        occ[v] = 1;
    };

    CouplingReport report;
    if (bad_count) report.first_violation = 0;
    StreamRng rng(cfg.seed, 0);
    StreamRng lower_rng(cfg.seed, 1);
    for (std::uint64_t e = 1; e <= cfg.events; ++e) {
        const auto v = static_cast<VertexId>(rng.below(n));
        const bool act = rng.uniform01() < 0.5;
        const double zeta = rng.uniform01();

        VertexId touched[2] = {v, v};
        VertexId v2 = v;
        bool act2 = false;
        double zeta2 = 0.0;
        if (cfg.mode == ClockMode::independent) {
            v2 = static_cast<VertexId>(lower_rng.below(n));
            act2 = lower_rng.uniform01() < 0.5;
            zeta2 = lower_rng.uniform01();
            touched[1] = v2;
        }
        const int distinct = touched[0] == touched[1] ? 1 : 2;
        for (int i = 0; i < distinct; ++i) {
            const VertexId w = touched[i];
            if (role[w] == kOutside) continue;
            bad_count -= bad(w);
            differ_count -= upper[w] != lower[w];
        }

        if (cfg.mode == ClockMode::independent) {
            if (act) update(upper, false, v, zeta);
            if (act2 && role[v2] != kOutside) update(lower, true, v2, zeta2);
        } else if (role[v] == kOutside) {
            if (act) update(upper, false, v, zeta);
        } else if (upper[v] == lower[v]) {
            if (act) {
                update(upper, false, v, zeta);
                update(lower, true, v, zeta);
            }
        } else if (act) {
            update(upper, false, v, zeta);
        } else {
            update(lower, true, v, zeta);
        }

        for (int i = 0; i < distinct; ++i) {
            const VertexId w = touched[i];
            if (role[w] == kOutside) continue;
            bad_count += bad(w);
            differ_count += upper[w] != lower[w];
        }

        report.events = e;
        if (bad_count) {
            ++report.violation_events;
            if (!report.first_violation) report.first_violation = e;
        }
        if (differ_count) ++report.differing_events;
    }
    return report;
}

GreedyChainResult run_greedy_chain(std::size_t n, double p, std::uint64_t seed,
                                   std::span<const std::uint64_t> checkpoints) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, fmt::format("probability {} outside [0, 1]", p));
    const double q = 1.0 - p;
    std::vector<std::uint64_t> marks(checkpoints.begin(), checkpoints.end());
    std::sort(marks.begin(), marks.end());
    std::size_t next_mark = 0;

    GreedyChainResult out;
    StreamRng rng(seed);
    double q_left = 1.0, q_right = 1.0;  // q^L_t and q^R_t
    double compensator = 0.0;            // sum_{s<t} (q^{R_s} - q^{L_s})
    auto martingale = [&] {
        return static_cast<double>(out.left) - static_cast<double>(out.right) - 0.5 * compensator;
    };
    auto checkpoint = [&](std::uint64_t t) {
        while (next_mark < marks.size() && marks[next_mark] == t) {
            out.checkpoints.push_back({t, out.left, out.right, martingale()});
            ++next_mark;
        }
    };
    checkpoint(0);
    const std::uint64_t horizon = 2 * static_cast<std::uint64_t>(n);
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        compensator += q_right - q_left;
        const bool left_side = rng.uniform01() < 0.5;
        const double grow = rng.uniform01();
        if (left_side) {
            if (grow < q_right) {
                ++out.left;
                q_left *= q;
            }
        } else if (grow < q_left) {
            ++out.right;
            q_right *= q;
        }
        checkpoint(t);
    }
    out.t = horizon;
    out.discrepancy = static_cast<std::int64_t>(out.left) - static_cast<std::int64_t>(out.right);
    out.martingale = martingale();
    return out;
}

}  // namespace annealbench
