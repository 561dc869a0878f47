#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <vector>

#include "annealbench/dynamics.hpp"
#include "annealbench/rng.hpp"

namespace annealbench {

/// Worker count from ANNEALBENCH_WORKERS, else the OpenMP default.
int default_workers();

/// Applies fn to 0..count-1 on up to `workers` OpenMP threads (0 means
/// default_workers()). Results are stored by index, so the output does not
/// depend on scheduling. The first exception thrown by any call is rethrown
/// after the loop.
template <typename Result>
std::vector<Result> parallel_map(std::size_t count, const std::function<Result(std::size_t)>& fn, int workers = 0) {
    std::vector<Result> out(count);
    std::vector<std::exception_ptr> errors(count);
    const int threads = workers > 0 ? workers : default_workers();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

/// Serial reference for parallel_map.
template <typename Result>
std::vector<Result> serial_map(std::size_t count, const std::function<Result(std::size_t)>& fn) {
    std::vector<Result> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
    return out;
}

/// A trial body: given the trial id and its derived seed, run one trial.
using TrialKernel = std::function<TrialRecord(std::uint64_t trial_id, std::uint64_t seed)>;

/// Runs trials 0..trials-1 with seeds trial_seed(master, id), filling in
/// trial_id and seed on each record.
std::vector<TrialRecord> run_trials_serial(std::size_t trials, std::uint64_t master, const TrialKernel& kernel);
std::vector<TrialRecord> run_trials_parallel(std::size_t trials, std::uint64_t master, const TrialKernel& kernel,
                                             int workers = 0);

}  // namespace annealbench
