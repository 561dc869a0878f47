#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace annealbench {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Key of the independent stream `stream` under `master`. Streams are
/// addressed, not advanced, so drawing from one never perturbs another.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return mix64(mix64(master + 0x9e3779b97f4a7c15ULL) ^ mix64(stream ^ 0xd1b54a32d192ed03ULL));
}

/// Counter-based generator: the i-th draw is mix64(key + i * gamma), i.e. a
/// SplitMix64 sequence whose position can be set directly. A simulation that
/// consumes a fixed number of draws per step can therefore replay any step by
/// seeking to its counter.
class StreamRng {
public:
    using result_type = std::uint64_t;

    explicit StreamRng(std::uint64_t key) noexcept : key_(key) {}
    StreamRng(std::uint64_t master, std::uint64_t stream) noexcept : key_(derive_seed(master, stream)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next(); }

    result_type next() noexcept { return mix64(key_ + (++counter_) * kGamma); }

    /// Position so that the next draw is draw number `counter + 1`.
    void seek(std::uint64_t counter) noexcept { counter_ = counter; }
    std::uint64_t counter() const noexcept { return counter_; }
    std::uint64_t key() const noexcept { return key_; }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., n-1} by multiply-shift; bias is at most n / 2^64
    /// and exactly one draw is consumed.
    std::uint64_t below(std::uint64_t n) noexcept {
        __extension__ using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next()) * n) >> 64);
    }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    double exponential(double rate) noexcept { return -std::log1p(-uniform01()) / rate; }

    /// Number of failures before the first success of a Bernoulli(p) sequence,
    /// p in (0, 1). Saturates at uint64 max.
    std::uint64_t geometric_gap(double p) noexcept {
        const double u = uniform01();
        const double g = std::floor(std::log1p(-u) / std::log1p(-p));
        if (!(g < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
        return static_cast<std::uint64_t>(g);
    }

    /// Poisson by sequential inversion; intended for moderate means (< ~500).
    std::uint64_t poisson(double mean) noexcept {
        const double u = uniform01();
        double prob = std::exp(-mean);
        double cdf = prob;
        std::uint64_t k = 0;
        while (u >= cdf && k < 100000) {
            ++k;
            prob *= mean / static_cast<double>(k);
            cdf += prob;
            if (prob == 0.0 && cdf < u) break;
        }
        return k;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Stream ids used by the generators and harness.
namespace streams {
inline constexpr std::uint64_t kBaseEdges = 1;
inline constexpr std::uint64_t kSides = 2;
inline constexpr std::uint64_t kCrossEdges = 3;
inline constexpr std::uint64_t kTrialBase = std::uint64_t{1} << 32;
}  // namespace streams

/// Seed of trial `trial_id` under an experiment's master seed.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_id) noexcept {
    return derive_seed(master, streams::kTrialBase + trial_id);
}

}  // namespace annealbench
