#include "annealbench/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "annealbench/errors.hpp"

namespace annealbench {

double ruin_probability(double p_up, double p_down, std::size_t m) {
    if (!(p_up >= 0.0 && p_down >= 0.0) || std::abs(p_up + p_down - 1.0) > 1e-12)
        throw Error(ErrorKind::InvalidDrift, fmt::format("step probabilities {} and {} do not sum to 1", p_up, p_down));
    if (!(p_up > p_down)) throw Error(ErrorKind::InvalidDrift, fmt::format("drift p_up - p_down = {} is not positive", p_up - p_down));
    return std::pow(p_down / p_up, static_cast<double>(m));
}

std::vector<double> birth_death_stationary(std::span<const double> up, std::span<const double> down,
                                           std::span<const double> stay) {
    const std::size_t states = up.size();
    if (states == 0 || down.size() != states || stay.size() != states)
        throw Error(ErrorKind::InvalidChain, "rate vectors must be nonempty and of equal length");
    for (std::size_t i = 0; i < states; ++i) {
        if (!(up[i] >= 0.0 && down[i] >= 0.0 && stay[i] >= 0.0))
            throw Error(ErrorKind::InvalidChain, fmt::format("negative probability at state {}", i));
        if (std::abs(up[i] + down[i] + stay[i] - 1.0) > 1e-9)
            throw Error(ErrorKind::InvalidChain, fmt::format("probabilities at state {} sum to {}", i, up[i] + down[i] + stay[i]));
        if (i + 1 < states && !(up[i] > 0.0)) throw Error(ErrorKind::InvalidChain, fmt::format("up[{}] must be positive", i));
        if (i > 0 && !(down[i] > 0.0)) throw Error(ErrorKind::InvalidChain, fmt::format("down[{}] must be positive", i));
    }
    if (down[0] != 0.0 || up[states - 1] != 0.0)
        throw Error(ErrorKind::InvalidChain, "chain must not step below 0 or above k");

    std::vector<double> log_w(states, 0.0);
    for (std::size_t j = 1; j < states; ++j) log_w[j] = log_w[j - 1] + std::log(up[j - 1]) - std::log(down[j]);
    const double top = *std::max_element(log_w.begin(), log_w.end());
    std::vector<double> pi(states);
    for (std::size_t j = 0; j < states; ++j) pi[j] = std::exp(log_w[j] - top);
    const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& x : pi) x /= total;
    return pi;
}

std::vector<BranchDistribution> branch_chain_trajectory(const BranchChainSpec& spec) {
    const std::size_t steps = std::min(spec.updates, spec.lambdas.size());
    std::vector<BranchDistribution> out;
    out.reserve(steps + 1);
    BranchDistribution d;
    out.push_back(d);
    for (std::size_t j = 0; j < steps; ++j) {
        const double lambda = spec.lambdas[j];
        if (!(lambda >= 1.0)) throw Error(ErrorKind::InvalidFugacity, fmt::format("fugacity {} outside [1, inf]", lambda));
        const double leave = std::isinf(lambda) ? 0.0 : 1.0 / (2.0 * lambda);
        const BranchDistribution next{d.none / 2.0 + (1.0 - leave) * d.a, d.none / 2.0 + (1.0 - leave) * d.b,
                                      leave * (d.a + d.b)};
        d = next;
        out.push_back(d);
    }
    return out;
}

double branch_chain_prob_A(const BranchChainSpec& spec) { return branch_chain_trajectory(spec).back().a; }

std::size_t bipartite_is_bound(std::size_t n, double d) {
    if (!(d > std::exp(2.0))) throw Error(ErrorKind::OutOfRegime, fmt::format("d = {} is not above e^2", d));
    return static_cast<std::size_t>(std::ceil(2.0 * std::log(d) / d * static_cast<double>(n)));
}

double burn_in_time(const BlowupParams& params) {
    return 1.0 / (8.0 * static_cast<double>(params.k) * params.p * static_cast<double>(params.n));
}

BurnInReport burn_in_stats(const TrialRecord& trial, const BlowupParams& params) {
    BurnInReport r;
    r.t_burn = burn_in_time(params);
    const auto it = std::find_if(trial.ct_probes.begin(), trial.ct_probes.end(), [&](const CtProbe& p) {
        return std::abs(p.time - r.t_burn) <= 1e-12 * std::max(1.0, r.t_burn);
    });
    if (it == trial.ct_probes.end())
        throw Error(ErrorKind::InsufficientRecord, fmt::format("no probe at burn-in time {}", r.t_burn));
    r.occ_left = it->occ_left;
    r.occ_right = it->occ_right;
    r.right_touched = it->right_touched;
    r.left_fraction = static_cast<double>(it->occ_left) / static_cast<double>(params.n);
    r.left_ok = 10 * r.occ_left >= params.n;
    r.right_touched_ok = static_cast<double>(r.right_touched) <= 1.0 / (4.0 * params.p);
    return r;
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (phat + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

Interval frequency_interval(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(k) / nn;
    if (nn * phat < 5.0 || nn * (1.0 - phat) < 5.0) return wilson_interval(k, n, z);
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn);
    return {std::max(0.0, phat - half), std::min(1.0, phat + half)};
}

double quantile_sorted(std::span<const double> sorted, double prob) {
    if (sorted.empty()) throw Error(ErrorKind::EmptyInput, "quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(prob, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SummaryStats describe_sample(std::span<const double> values, std::span<const double> thresholds) {
    if (values.empty()) throw Error(ErrorKind::EmptyInput, "no values to summarize");
    SummaryStats s;
    s.trials = values.size();
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : values) ss += (x - s.mean) * (x - s.mean);
    s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    const double half = 1.959963984540054 * s.stddev / std::sqrt(n);
    s.mean_ci = {s.mean - half, s.mean + half};

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    for (double prob : kReportedQuantiles) s.quantiles.emplace_back(prob, quantile_sorted(sorted, prob));

    for (double thr : thresholds) {
        FrequencyStat f;
        f.threshold = thr;
        f.count = static_cast<std::uint64_t>(std::lower_bound(sorted.begin(), sorted.end(), thr) - sorted.begin());
        f.frequency = static_cast<double>(f.count) / n;
        f.ci = frequency_interval(f.count, values.size());
        s.failures.push_back(f);
    }
    return s;
}

SummaryStats summarize(std::span<const TrialRecord> records, std::size_t alpha, std::span<const double> thresholds) {
    if (records.empty()) throw Error(ErrorKind::EmptyInput, "no trial records to summarize");
    if (alpha == 0) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
    std::vector<double> ratios;
    ratios.reserve(records.size());
    for (const auto& r : records) ratios.push_back(static_cast<double>(r.max_size) / static_cast<double>(alpha));
    SummaryStats s = describe_sample(ratios);
    // Failure frequencies are on the raw sizes.
    std::vector<double> sizes;
    sizes.reserve(records.size());
    for (const auto& r : records) sizes.push_back(static_cast<double>(r.max_size));
    s.failures = describe_sample(sizes, thresholds).failures;
    return s;
}

}  // namespace annealbench
