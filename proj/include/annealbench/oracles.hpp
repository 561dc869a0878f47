#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "annealbench/dynamics.hpp"
#include "annealbench/instances.hpp"

namespace annealbench {

/// Probability that a +1/-1 walk with step probabilities (p_up, p_down)
/// ever drops m below its start: (p_down/p_up)^m. Raises InvalidDrift unless
/// p_up + p_down = 1 and p_up > p_down.
double ruin_probability(double p_up, double p_down, std::size_t m);

/// Stationary law of a birth-death chain on {0..k}: up[i], down[i], stay[i]
/// are the transition probabilities out of state i (down[0] = up[k] = 0).
/// Weights are accumulated in log space. Raises InvalidChain.
std::vector<double> birth_death_stationary(std::span<const double> up, std::span<const double> down,
                                           std::span<const double> stay);

/// Fugacities seen by one branch {a_i, b_i} of the star tree at its
/// successive updates; `updates` of them are applied (all when unset).
struct BranchChainSpec {
    std::vector<double> lambdas;
    std::size_t updates = static_cast<std::size_t>(-1);
};

/// Distribution over the branch states (a_i held, b_i held, neither).
struct BranchDistribution {
    double a = 1.0;
    double b = 0.0;
    double none = 0.0;
};

/// Exact forward propagation from state A; element j is the law after j
/// updates (element 0 is the start). Raises InvalidFugacity for lambda < 1.
std::vector<BranchDistribution> branch_chain_trajectory(const BranchChainSpec& spec);

/// P(X = A) after the requested number of updates.
double branch_chain_prob_A(const BranchChainSpec& spec);

/// ceil(2 ln(d) / d * n), the per-side size above which a random balanced
/// bipartite graph with average degree d has no balanced independent set
/// w.h.p. Raises OutOfRegime for d <= e^2.
std::size_t bipartite_is_bound(std::size_t n, double d);

/// Continuous-time burn-in horizon 1/(8kpn).
double burn_in_time(const BlowupParams& params);

struct BurnInReport {
    double t_burn = 0.0;
    std::size_t occ_left = 0;
    double left_fraction = 0.0;
    std::size_t right_touched = 0;
    std::size_t occ_right = 0;
    bool left_ok = false;           // occ_left >= n / 10
    bool right_touched_ok = false;  // right_touched <= 1 / (4p)
};

/// Reads the probe taken at time 1/(8kpn) from a continuous-time run on the
/// blowup base. Raises InsufficientRecord when no such probe exists.
BurnInReport burn_in_stats(const TrialRecord& trial, const BlowupParams& params);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

/// Normal-approximation interval for a frequency, falling back to Wilson
/// when n p or n (1 - p) is below 5.
Interval frequency_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

/// Linear-interpolation quantile (type 7) of an ascending sample.
double quantile_sorted(std::span<const double> sorted, double prob);

struct FrequencyStat {
    double threshold = 0.0;
    std::uint64_t count = 0;  // trials below the threshold
    double frequency = 0.0;
    Interval ci;
};

struct SummaryStats {
    std::size_t trials = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n - 1)
    Interval mean_ci;     // normal approximation, 95%
    std::vector<std::pair<double, double>> quantiles;  // (probability, value)
    std::vector<FrequencyStat> failures;
};

inline constexpr double kReportedQuantiles[] = {0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0};

/// Statistics of an arbitrary sample; failures[i] counts values below
/// thresholds[i]. Raises EmptyInput.
SummaryStats describe_sample(std::span<const double> values, std::span<const double> thresholds = {});

/// Ratio statistics max_size / alpha over trials, with failure frequencies
/// of max_size against each size threshold. Raises EmptyInput.
SummaryStats summarize(std::span<const TrialRecord> records, std::size_t alpha, std::span<const double> thresholds = {});

}  // namespace annealbench
