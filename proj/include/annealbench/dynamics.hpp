#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "annealbench/graph.hpp"
#include "annealbench/instances.hpp"
#include "annealbench/schedule.hpp"

namespace annealbench {

enum class UpdateOutcome { added, removed, blocked, kept };

/// One Metropolis update at v: an unoccupied v is added iff none of its
/// neighbors is occupied; an occupied v is removed iff zeta <= 1/lambda
/// (never when lambda is infinite). Raises InvalidFugacity for lambda < 1.
UpdateOutcome ump_update(IndependentSetState& state, const Graph& g, VertexId v, double zeta, double lambda);

struct HitTime {
    std::size_t threshold = 0;
    std::optional<std::uint64_t> step;  // first step with |I_t| >= threshold
};

struct Snapshot {
    std::uint64_t step = 0;
    std::size_t size = 0;
    std::size_t occ_left = 0;
    std::size_t occ_right = 0;
};

/// State of a continuous-time run at a requested time.
struct CtProbe {
    double time = 0.0;
    std::uint64_t events = 0;
    std::size_t occ_left = 0;
    std::size_t occ_right = 0;
    std::size_t right_touched = 0;  // right vertices whose clock has rung
};

struct RecorderConfig {
    std::vector<std::size_t> thresholds;
    /// Snapshot period in steps; 0 means ceil(T / 1000).
    std::uint64_t snapshot_every = 0;
    bool keep_snapshots = true;
    /// Steps (discrete) after which the state is recorded into `probes`.
    std::vector<std::uint64_t> probe_steps;
    /// Continuous times at which continuous-time runs record `ct_probes`.
    std::vector<double> probe_times;
    std::optional<VertexId> watch_vertex;
    bool track_clouds = false;  // per-group loads and deload count
    std::optional<std::size_t> stop_at_size;
    bool check_independence = false;  // full independence check at snapshots
    bool keep_best_set = false;
    bool keep_final_set = false;
};

/// Outcome of one trial. Steps are 1-based; step_of_max is the earliest
/// step attaining max_size (0 if the set never left the empty state).
struct TrialRecord {
    std::uint64_t trial_id = 0;
    std::uint64_t seed = 0;
    std::uint64_t steps = 0;
    std::size_t max_size = 0;
    std::uint64_t step_of_max = 0;
    std::size_t final_size = 0;
    std::size_t final_occ_left = 0;
    std::size_t final_occ_right = 0;
    std::vector<HitTime> hitting_times;
    std::vector<Snapshot> snapshots;
    std::vector<Snapshot> probes;
    std::vector<CtProbe> ct_probes;
    bool root_added = false;
    std::optional<std::uint64_t> root_first_step;
    std::uint64_t deload_final = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> deload_series;  // (step, deload)
    double end_time = 0.0;                                              // continuous runs
    std::vector<VertexId> best_set;
    std::vector<VertexId> final_set;

    std::optional<std::uint64_t> hit_step(std::size_t threshold) const;
};

/// Per-group occupancy loads. A group deloads the first time its load
/// returns to zero after having been positive; deload() counts such groups.
class CloudTracker {
public:
    CloudTracker() = default;
    explicit CloudTracker(std::span<const std::int64_t> groups);

    bool enabled() const noexcept { return !group_of_.empty(); }
    void on_add(VertexId v) noexcept {
        const auto c = group_of_[v];
        if (c < 0) return;
        ++load_[static_cast<std::size_t>(c)];
        loaded_[static_cast<std::size_t>(c)] = 1;
    }
    void on_remove(VertexId v) noexcept {
        const auto c = group_of_[v];
        if (c < 0) return;
        const auto i = static_cast<std::size_t>(c);
        if (--load_[i] == 0 && !deloaded_[i]) {
            deloaded_[i] = 1;
            ++deload_;
        }
    }
    std::uint64_t deload() const noexcept { return deload_; }
    std::size_t num_groups() const noexcept { return load_.size(); }
    std::uint32_t load(std::size_t c) const noexcept { return load_[c]; }
    bool ever_loaded(std::size_t c) const noexcept { return loaded_[c] != 0; }
    bool deloaded(std::size_t c) const noexcept { return deloaded_[c] != 0; }

private:
    std::span<const std::int64_t> group_of_;
    std::vector<std::uint32_t> load_;
    std::vector<std::uint8_t> loaded_;
    std::vector<std::uint8_t> deloaded_;
    std::uint64_t deload_ = 0;
};

/// Discrete UMP from the empty set for T steps. Each step consumes exactly
/// two draws from StreamRng(seed): the vertex, then zeta.
TrialRecord run_ump(const Graph& g, const FugacitySchedule& sched, std::uint64_t T, std::uint64_t seed,
                    const RecorderConfig& rec = {});

struct GreedyResult {
    std::vector<VertexId> set;
    TrialRecord record;
};

/// Randomized greedy: scan a uniform random permutation once, adding every
/// vertex with no neighbor already added.
GreedyResult run_randomized_greedy(const Graph& g, std::uint64_t seed);

/// Minimum residual degree greedy with lowest-index tie-breaking.
std::vector<VertexId> run_degree_greedy(const Graph& g);

struct WeightedCTConfig {
    std::vector<double> rate;        // rho(v) > 0
    std::vector<double> multiplier;  // fugacity multiplier, >= 1
    double horizon = std::numeric_limits<double>::infinity();
    std::uint64_t max_events = std::numeric_limits<std::uint64_t>::max();
};

/// Rates and multipliers under which the base graph run reproduces the
/// projected discrete run on its ell-clique blowup: left vertices get rate
/// and multiplier ell, right vertices 1.
WeightedCTConfig clique_blowup_ct_config(const Graph& base, std::size_t ell, double horizon,
                                         std::uint64_t max_events = std::numeric_limits<std::uint64_t>::max());

/// Continuous-time weighted UMP by next-event simulation. Each event
/// consumes four draws: the exponential gap, two for the alias-table vertex
/// choice, then zeta. The event is applied with effective fugacity
/// multiplier(v) * lambda_t where t counts events. Stops at the horizon or
/// after max_events; `steps` counts applied events. Raises InvalidRate.
TrialRecord run_ct_ump(const Graph& base, const WeightedCTConfig& cfg, const FugacitySchedule& sched,
                       std::uint64_t seed, const RecorderConfig& rec = {});

/// Maps an independent set of a clique blowup to the base graph (clique
/// members to their base vertex, right vertices shifted back). Raises
/// NotIndependent if the set is not independent in `blowup`.
std::vector<VertexId> phi_project(const Graph& blowup, std::span<const VertexId> set, const CliqueMeta& meta);

/// W = l1 ∪ r0 inside a bipartite graph; l1 must have no neighbor outside r0.
struct CouplingSetup {
    std::vector<VertexId> l1;
    std::vector<VertexId> r0;
};

enum class ClockMode { shared, independent };

struct CouplingConfig {
    double lambda = 1.0;
    std::uint64_t events = 100000;
    std::uint64_t seed = 0;
    ClockMode mode = ClockMode::shared;
};

struct CouplingReport {
    std::uint64_t events = 0;
    std::uint64_t violation_events = 0;  // events after which the order fails
    std::optional<std::uint64_t> first_violation;
    std::uint64_t differing_events = 0;  // events after which the states differ on W
};

/// Lazy coupled run of the process on the whole graph (upper, from upper0)
/// and the process on the subgraph induced by W (lower, from lower0 ⊆ W).
/// With shared clocks a ring in W updates both processes identically when
/// they agree at the ringing vertex and swaps update and discard when they
/// differ; rings outside W move only the upper process. After every event
/// checks upper ∩ l1 ⊇ lower ∩ l1 and upper ∩ r0 ⊆ lower ∩ r0.
CouplingReport run_coupled_monotone(const Graph& g, const CouplingSetup& setup, std::span<const VertexId> upper0,
                                    std::span<const VertexId> lower0, const CouplingConfig& cfg);

struct ChainCheckpoint {
    std::uint64_t t = 0;
    std::uint64_t left = 0;
    std::uint64_t right = 0;
    double martingale = 0.0;
};

struct GreedyChainResult {
    std::uint64_t t = 0;
    std::uint64_t left = 0;
    std::uint64_t right = 0;
    std::int64_t discrepancy = 0;  // left - right
    double martingale = 0.0;
    std::vector<ChainCheckpoint> checkpoints;
};

/// The side-count chain of randomized greedy on a random balanced bipartite
/// graph, run for 2n steps: a fair coin picks the side, and the left count
/// grows with probability q^right (q = 1 - p), the right count with
/// probability q^left. The martingale is
/// M_t = L_t - R_t - (1/2) sum_{s<t} (q^{R_s} - q^{L_s}).
GreedyChainResult run_greedy_chain(std::size_t n, double p, std::uint64_t seed,
                                   std::span<const std::uint64_t> checkpoints = {});

}  // namespace annealbench
