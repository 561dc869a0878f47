#include "annealbench/trials.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <string_view>

#include <omp.h>

namespace annealbench {

int default_workers() {
    if (const char* env = std::getenv("ANNEALBENCH_WORKERS")) {
        const std::string_view text(env);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc{} && ptr == text.data() + text.size() && value > 0) return value;
    }
    return std::max(1, omp_get_max_threads());
}

namespace {

TrialRecord run_one(std::uint64_t id, std::uint64_t master, const TrialKernel& kernel) {
    const std::uint64_t seed = trial_seed(master, id);
    TrialRecord r = kernel(id, seed);
    r.trial_id = id;
    r.seed = seed;
    return r;
}

}  // namespace

std::vector<TrialRecord> run_trials_serial(std::size_t trials, std::uint64_t master, const TrialKernel& kernel) {
    return serial_map<TrialRecord>(trials, [&](std::size_t i) { return run_one(i, master, kernel); });
}

std::vector<TrialRecord> run_trials_parallel(std::size_t trials, std::uint64_t master, const TrialKernel& kernel,
                                             int workers) {
    return parallel_map<TrialRecord>(trials, [&](std::size_t i) { return run_one(i, master, kernel); }, workers);
}

}  // namespace annealbench
