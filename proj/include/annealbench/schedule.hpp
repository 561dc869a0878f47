#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace annealbench {

inline constexpr double kInfiniteFugacity = std::numeric_limits<double>::infinity();

/// What an adaptive rule may observe at step t: the current state and
/// summary counters of the trajectory so far. No RNG access, so every
/// adaptive run is replayable from its seed.
struct HistoryDigest {
    std::uint64_t t = 0;  // step about to be taken, 1-based
    std::size_t size = 0;
    std::size_t max_size = 0;
    std::uint64_t step_of_max = 0;
    std::size_t occ_left = 0;
    std::size_t occ_right = 0;
    std::span<const std::uint8_t> occupancy;
};

using AdaptiveRule = std::function<double(const HistoryDigest&)>;

/// Fugacity schedule lambda_t with values in [1, inf].
///   fixed       lambda_t = lambda
///   infinite    lambda_t = inf (randomized greedy)
///   sequence    explicit list; the last value holds after it runs out
///   anneal      geometric from lambda0 to lambda1 over `length` steps, then holds
///   adaptive    named rule evaluated on the history digest
class FugacitySchedule {
public:
    enum class Kind { fixed, infinite, sequence, anneal, adaptive };

    static FugacitySchedule fixed(double lambda);
    static FugacitySchedule infinite();
    static FugacitySchedule sequence(std::vector<double> values);
    static FugacitySchedule anneal(double lambda0, double lambda1, std::uint64_t length);
    static FugacitySchedule adaptive(std::string name, AdaptiveRule rule);

    Kind kind() const noexcept { return kind_; }
    bool is_adaptive() const noexcept { return kind_ == Kind::adaptive; }

    /// lambda_t for a non-adaptive schedule (t is 1-based).
    double at(std::uint64_t t) const;

    /// lambda_t for any schedule; non-adaptive kinds ignore everything but t.
    double at(const HistoryDigest& digest) const { return kind_ == Kind::adaptive ? rule_(digest) : at(digest.t); }

    /// Canonical text form, parseable by parse_schedule (sequences are
    /// described by their length and a content hash rather than the path).
    std::string describe() const;

private:
    Kind kind_ = Kind::infinite;
    double lambda_ = kInfiniteFugacity;
    double lambda1_ = kInfiniteFugacity;
    double log_ratio_ = 0.0;
    std::uint64_t length_ = 1;
    std::shared_ptr<const std::vector<double>> values_;
    std::string name_;
    AdaptiveRule rule_;
};

/// Parses a schedule spec:
///   fixed:<lambda>          lambda may be "inf"
///   greedy | infinite
///   seq:<file>              one lambda per line, '#' comments allowed
///   anneal:<l0>:<l1>:<T>
///   adaptive:<name>[:args]  see adaptive_rule_names()
/// Raises InvalidFugacity for a lambda below 1 and ConfigError for a
/// malformed spec.
FugacitySchedule parse_schedule(std::string_view spec);

/// Adaptive rules known to parse_schedule:
///   left_purge               lambda = 1 while more than half the occupied
///                            vertices are left-side, inf otherwise
///   stall_reheat:W:lo:hi     lambda = lo once the maximum has not improved
///                            for W steps, hi before that
///   size_ramp:c              lambda = max(1, c * |I_t|)
std::vector<std::string> adaptive_rule_names();

/// Parses a lambda literal ("inf", "infinity" or a number >= 1).
double parse_fugacity(std::string_view text);

}  // namespace annealbench
