#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "annealbench/dynamics.hpp"
#include "annealbench/instances.hpp"

namespace annealbench {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Experiment description. Text form:
///
///   name = tree_hardness          # top level: name, seed, trials, steps,
///   seed = 7                      # mode (auto|discrete|ct|greedy), horizon,
///   trials = 200                  # output_dir, workers
///   steps = 1000000
///   [instance]                    # family plus generator parameters
///   family = star_tree
///   k = 400
///   [schedules]                   # label = schedule spec
///   fixed_2 = fixed:2
///   [record]                      # thresholds, probe_steps, probe_times,
///   probe_steps = 11              # watch, track_clouds, stop_at_size,
///   watch = 0                     # snapshot_every, check_independence
///   [checks]                      # label = check expression
///   root_rare = frac(root_added >= 1) <= 0.05
///
/// Check expressions, evaluated per schedule:
///   mean(col) OP x
///   frac(col OP x) OP y           fraction of trials satisfying the test
///   pfrac(step, col OP x) OP y    same over the probe rows taken at `step`
/// with OP one of <, <=, >, >=, ==. Run columns: steps, max_size,
/// step_of_max, alpha, ratio, root_added, deload_final. Probe columns:
/// size, occ_l, occ_r.
struct ExperimentConfig {
    std::string name;
    std::uint64_t seed = 0;
    std::size_t trials = 1;
    std::uint64_t steps = 1;
    std::string mode = "auto";
    std::optional<double> horizon;
    std::string output_dir;
    int workers = 0;

    std::string family;
    ParamMap instance_params;
    std::optional<std::uint64_t> instance_seed;

    KeyValues schedules;
    RecorderConfig record;
    KeyValues checks;

    /// Every key as "section.key" -> value, used for hashing.
    KeyValues raw;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical serialization of the semantic fields (output_dir and workers
/// excluded) and its 64-bit FNV-1a hash.
std::string canonical_config(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// One line of a run CSV.
struct RunRow {
    std::uint64_t trial_id = 0;
    std::uint64_t seed = 0;
    std::uint64_t steps = 0;
    std::size_t max_size = 0;
    std::uint64_t step_of_max = 0;
    std::size_t alpha = 0;
    double ratio = 0.0;
    bool root_added = false;
    std::uint64_t deload_final = 0;
};

struct ProbeRow {
    std::uint64_t trial_id = 0;
    std::uint64_t step = 0;
    std::size_t size = 0;
    std::size_t occ_l = 0;
    std::size_t occ_r = 0;
};

inline constexpr std::string_view kRunCsvHeader =
    "trial_id,seed,steps,max_size,step_of_max,alpha,ratio,root_added,deload_final";
inline constexpr std::string_view kProbeCsvHeader = "trial_id,step,size,occ_l,occ_r";

RunRow make_run_row(const TrialRecord& record, std::size_t alpha);
std::string format_run_csv(std::span<const RunRow> rows);
std::vector<RunRow> parse_run_csv(std::string_view text);
std::string format_probe_csv(std::span<const ProbeRow> rows);
std::vector<ProbeRow> parse_probe_csv(std::string_view text);

struct Verdict {
    std::string check;
    std::string schedule;
    std::string expression;
    double observed = 0.0;
    std::string op;
    double threshold = 0.0;
    double margin = 0.0;  // positive on the passing side
    bool pass = false;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Evaluates one check against a schedule's rows. Raises ConfigError for a
/// malformed expression and IncompleteRun when the rows needed are absent.
Verdict evaluate_check(const std::string& check, const std::string& expression, const std::string& schedule,
                       std::span<const RunRow> rows, std::span<const ProbeRow> probes = {});

std::string format_verdict_csv(std::span<const Verdict> verdicts);
std::vector<Verdict> parse_verdict_csv(std::string_view text);
std::string format_verdict_text(std::span<const Verdict> verdicts);

/// Per-schedule summary line.
struct SummaryRow {
    std::string schedule;
    std::size_t trials = 0;
    std::size_t alpha = 0;
    double mean_ratio = 0.0;
    double sd_ratio = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double q05 = 0.0;
    double q50 = 0.0;
    double q95 = 0.0;
    double mean_max_size = 0.0;
    double root_added_frac = 0.0;
    double mean_deload = 0.0;
};

SummaryRow summarize_rows(const std::string& schedule, std::span<const RunRow> rows);
std::string format_summary_csv(std::span<const SummaryRow> rows);

struct ScheduleResult {
    std::string label;
    std::string spec;
    std::vector<RunRow> rows;
    std::vector<ProbeRow> probes;
    SummaryRow summary;
};

struct ExperimentManifest {
    std::uint64_t config_hash = 0;
    std::string tool_version;
    std::string name;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> trial_seeds;
    double wall_seconds = 0.0;
    std::size_t alpha = 0;
    std::string run_mode;
    std::vector<std::string> outputs;
    std::vector<ScheduleResult> results;
    std::vector<Verdict> verdicts;
    bool all_pass = true;
};

struct RunOptions {
    int workers = 0;        // overrides the config and environment when > 0
    bool serial = false;    // use the serial trial loop
    bool write_files = true;
};

/// Builds the instance, runs every schedule's trials in parallel, writes
/// the run CSVs (and probe CSVs when probes are recorded), summary,
/// verdicts and manifest into output_dir, and evaluates the checks.
/// Raises ConfigError for an invalid config and IoError when output_dir
/// cannot be written.
ExperimentManifest run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

std::string format_manifest(const ExperimentManifest& manifest);

std::string tool_version();

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace annealbench
