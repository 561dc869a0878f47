#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "annealbench/dynamics.hpp"
#include "annealbench/errors.hpp"
#include "annealbench/instances.hpp"
#include "annealbench/oracles.hpp"
#include "annealbench/schedule.hpp"
#include "support.hpp"

namespace ab = annealbench;
namespace ts = testsupport;

namespace {

template <class F>
ab::ErrorKind kind_of(F&& fn) {
    try {
        fn();
    } catch (const ab::Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ab::ErrorKind::InvalidArgument;
}

// Row-stochastic transition matrix of one branch update, states (A, B, none).
std::array<std::array<double, 3>, 3> branch_matrix(double lambda) {
    const double q = std::isinf(lambda) ? 0.0 : 0.5 / lambda;  // pick the held vertex, then remove
    return {{{1.0 - q, 0.0, q}, {0.0, 1.0 - q, q}, {0.5, 0.5, 0.0}}};
}

std::array<double, 3> propagate(const std::vector<double>& lambdas) {
    std::array<double, 3> x{1.0, 0.0, 0.0};
    for (double l : lambdas) {
        const auto P = branch_matrix(l);
        std::array<double, 3> y{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) y[j] += x[i] * P[i][j];
        x = y;
    }
    return x;
}

}  // namespace

TEST_CASE("ruin probability matches a capped Monte Carlo within three sigma") {
    struct Case {
        double up;
        int m;
        std::uint64_t walks;
    };
    for (const auto& c : {Case{2.0 / 3.0, 10, 400000}, Case{0.9, 1, 200000}, Case{2.0 / 3.0, 3, 200000}}) {
        const int cap = 40;
        const double exact = ab::ruin_probability(c.up, 1.0 - c.up, static_cast<std::size_t>(c.m));
        // The cap only removes walks that would return from +cap: r^(m+cap), negligible here.
        CHECK(std::abs(ts::ruin_with_cap(c.up, c.m, cap) - exact) < 1e-9);
        const auto est = ts::simulate_ruin(c.up, c.m, cap, c.walks, 77 + c.m);
        const double phat = static_cast<double>(est.hits) / static_cast<double>(est.walks);
        const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(est.walks));
        CHECK(std::abs(phat - exact) <= 3.0 * sigma);
    }
}

TEST_CASE("ruin probability closed values and errors") {
    CHECK(ab::ruin_probability(0.9, 0.1, 1) == doctest::Approx(1.0 / 9.0));
    CHECK(ab::ruin_probability(2.0 / 3.0, 1.0 / 3.0, 10) == doctest::Approx(std::pow(0.5, 10)));
    CHECK(ab::ruin_probability(0.6, 0.4, 0) == 1.0);
    CHECK(kind_of([] { ab::ruin_probability(0.5, 0.5, 3); }) == ab::ErrorKind::InvalidDrift);
    CHECK(kind_of([] { ab::ruin_probability(0.3, 0.7, 3); }) == ab::ErrorKind::InvalidDrift);
    CHECK(kind_of([] { ab::ruin_probability(0.6, 0.3, 3); }) == ab::ErrorKind::InvalidDrift);
}

TEST_CASE("birth-death stationary law: symmetric two-state chain") {
    const std::vector<double> up{0.5, 0.0}, down{0.0, 0.5}, stay{0.5, 0.5};
    const auto pi = ab::birth_death_stationary(up, down, stay);
    REQUIRE(pi.size() == 2);
    CHECK(pi[0] == doctest::Approx(0.5));
    CHECK(pi[1] == doctest::Approx(0.5));
}

TEST_CASE("birth-death stationary law agrees with a linear solve") {
    // Three states, weights 1:2:4 from up/down ratios of 2.
    const std::vector<double> up{0.4, 0.4, 0.0}, down{0.0, 0.2, 0.2}, stay{0.6, 0.4, 0.8};
    const auto pi = ab::birth_death_stationary(up, down, stay);
    CHECK(pi[0] == doctest::Approx(1.0 / 7.0));
    CHECK(pi[1] == doctest::Approx(2.0 / 7.0));
    CHECK(pi[2] == doctest::Approx(4.0 / 7.0));

    std::vector<std::vector<double>> P(3, std::vector<double>(3, 0.0));
    for (std::size_t i = 0; i < 3; ++i) {
        P[i][i] = stay[i];
        if (i + 1 < 3) P[i][i + 1] = up[i];
        if (i > 0) P[i][i - 1] = down[i];
    }
    const auto solved = ts::solve_stationary(P);
    for (std::size_t i = 0; i < 3; ++i) CHECK(pi[i] == doctest::Approx(solved[i]).epsilon(1e-12));
}

TEST_CASE("birth-death stationary law: detailed balance and simulation") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unif(0.05, 0.45);
    const std::size_t k = 12;
    std::vector<double> up(k + 1), down(k + 1), stay(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        up[i] = i < k ? unif(gen) : 0.0;
        down[i] = i > 0 ? unif(gen) : 0.0;
        stay[i] = 1.0 - up[i] - down[i];
    }
    const auto pi = ab::birth_death_stationary(up, down, stay);
    for (std::size_t i = 0; i < k; ++i) CHECK(std::abs(pi[i] * up[i] - pi[i + 1] * down[i + 1]) <= 1e-12);

    std::map<std::size_t, std::uint64_t> visits;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::size_t x = 0;
    const std::uint64_t steps = 2000000;
    for (std::uint64_t t = 0; t < steps; ++t) {
        const double z = u01(gen);
        if (z < up[x]) ++x;
        else if (z < up[x] + down[x]) --x;
        ++visits[x];
    }
    std::map<std::size_t, double> exact;
    for (std::size_t i = 0; i <= k; ++i) exact[i] = pi[i];
    CHECK(ts::tv_distance(ts::normalize_counts(visits), exact) <= 0.02);
}

TEST_CASE("birth-death stationary law rejects malformed chains") {
    auto call = [](std::vector<double> up, std::vector<double> down, std::vector<double> stay) {
        return kind_of([&] { ab::birth_death_stationary(up, down, stay); });
    };
    CHECK(call({}, {}, {}) == ab::ErrorKind::InvalidChain);
    CHECK(call({0.5, 0.0}, {0.0, 0.5}, {0.4, 0.5}) == ab::ErrorKind::InvalidChain);  // row sum
    CHECK(call({0.5, 0.0}, {0.1, 0.5}, {0.4, 0.5}) == ab::ErrorKind::InvalidChain);  // down[0]
    CHECK(call({0.5, 0.1}, {0.0, 0.5}, {0.5, 0.4}) == ab::ErrorKind::InvalidChain);  // up[k]
    CHECK(call({0.0, 0.0}, {0.0, 0.5}, {1.0, 0.5}) == ab::ErrorKind::InvalidChain);  // reducible
    CHECK(call({0.5, 0.0}, {0.0}, {0.5}) == ab::ErrorKind::InvalidChain);            // lengths
}

TEST_CASE("branch chain: closed values") {
    CHECK(ab::branch_chain_prob_A({{}, static_cast<std::size_t>(-1)}) == 1.0);
    CHECK(ab::branch_chain_prob_A({{1.0}, 1}) == doctest::Approx(0.5));
    CHECK(ab::branch_chain_prob_A({{1.0, 1.0, 1.0}, 0}) == 1.0);
    const auto inf = std::numeric_limits<double>::infinity();
    CHECK(ab::branch_chain_prob_A({{inf, inf, inf}}) == 1.0);
    CHECK(kind_of([] { ab::branch_chain_prob_A({{2.0, 0.5}}); }) == ab::ErrorKind::InvalidFugacity);
}

TEST_CASE("branch chain: agrees with matrix propagation, stays above a quarter") {
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> len(1, 60);
    std::uniform_real_distribution<double> logl(0.0, 6.0);
    std::bernoulli_distribution infinite(0.1);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> lambdas(static_cast<std::size_t>(len(gen)));
        for (double& l : lambdas) l = infinite(gen) ? std::numeric_limits<double>::infinity() : std::exp(logl(gen));
        const auto traj = ab::branch_chain_trajectory({lambdas});
        REQUIRE(traj.size() == lambdas.size() + 1);
        const auto oracle = propagate(lambdas);
        CHECK(traj.back().a == doctest::Approx(oracle[0]).epsilon(1e-12));
        CHECK(traj.back().b == doctest::Approx(oracle[1]).epsilon(1e-12));
        CHECK(traj.back().none == doctest::Approx(oracle[2]).epsilon(1e-12));
        for (const auto& d : traj) {
            CHECK(d.a + d.b + d.none == doctest::Approx(1.0));
            CHECK(d.a >= 0.25);
            CHECK(d.a >= d.b);
        }
    }
}

TEST_CASE("bipartite independent-set bound") {
    const auto formula = [](double n, double d) { return std::ceil(2.0 * std::log(d) / d * n); };
    CHECK(ab::bipartite_is_bound(5000, 16.0) == 1733);
    CHECK(ab::bipartite_is_bound(5000, 16.0) == static_cast<std::size_t>(formula(5000, 16)));
    const double d = std::exp(2.0) + 0.1;
    CHECK(ab::bipartite_is_bound(100, d) == static_cast<std::size_t>(formula(100, d)));
    CHECK(ab::bipartite_is_bound(100, d) == 54);
    CHECK(kind_of([] { ab::bipartite_is_bound(100, std::exp(2.0)); }) == ab::ErrorKind::OutOfRegime);
    CHECK(kind_of([] { ab::bipartite_is_bound(100, 3.0); }) == ab::ErrorKind::OutOfRegime);
}

TEST_CASE("burn-in statistics from continuous-time runs") {
    ab::BlowupParams params;
    params.n = 500;
    params.k = 10;
    params.p = 0.02;
    params.ell = 1000;
    params.seed = 3;
    const double t_burn = ab::burn_in_time(params);
    CHECK(t_burn == doctest::Approx(1.0 / 800.0));
    const auto base = ab::gen_base_bipartite(params.n, params.k, params.p, params.seed);
    const auto cfg = ab::clique_blowup_ct_config(base, params.ell, 2.0 * t_burn);
    const auto sched = ab::FugacitySchedule::fixed(1.0);

    ab::RecorderConfig rec;
    rec.probe_times = {t_burn};
    const int trials = 200;
    double touched_sum = 0.0;
    int left_ok = 0;
    for (int i = 0; i < trials; ++i) {
        const auto r = ab::run_ct_ump(base, cfg, sched, 1000 + static_cast<std::uint64_t>(i), rec);
        const auto rep = ab::burn_in_stats(r, params);
        touched_sum += static_cast<double>(rep.right_touched);
        left_ok += rep.left_ok;
        CHECK(rep.left_fraction == doctest::Approx(static_cast<double>(rep.occ_left) / 500.0));
    }
    // Each of the kn right vertices rings by t_burn with probability 1 - e^{-t_burn}.
    const double expect = 5000.0 * (1.0 - std::exp(-t_burn));
    const double sd_mean = std::sqrt(expect / trials);
    CHECK(std::abs(touched_sum / trials - expect) <= 4.0 * sd_mean);
    CHECK(expect == doctest::Approx(1.0 / (8.0 * params.p)).epsilon(0.01));
    CHECK(left_ok >= trials * 95 / 100);

    ab::RecorderConfig no_probe;
    const auto r = ab::run_ct_ump(base, cfg, sched, 1, no_probe);
    CHECK(kind_of([&] { ab::burn_in_stats(r, params); }) == ab::ErrorKind::InsufficientRecord);
}

TEST_CASE("Wilson and frequency intervals") {
    const auto w = ab::wilson_interval(0, 100);
    CHECK(w.low == 0.0);
    // Upper end for zero successes: z^2 / (n + z^2).
    const double z2 = 1.959963984540054 * 1.959963984540054;
    CHECK(w.high == doctest::Approx(z2 / (100.0 + z2)));
    const auto mid = ab::wilson_interval(50, 100);
    CHECK((mid.low + mid.high) / 2.0 == doctest::Approx(0.5));
    CHECK(mid.low < 0.5);

    const auto f = ab::frequency_interval(50, 100);
    const double half = 1.959963984540054 * std::sqrt(0.25 / 100.0);
    CHECK(f.low == doctest::Approx(0.5 - half));
    CHECK(f.high == doctest::Approx(0.5 + half));
    const auto small = ab::frequency_interval(2, 100);
    const auto small_w = ab::wilson_interval(2, 100);
    CHECK(small.low == small_w.low);
    CHECK(small.high == small_w.high);
    const auto none = ab::frequency_interval(0, 0);
    CHECK(none.low == 0.0);
    CHECK(none.high == 1.0);
}

TEST_CASE("quantiles match a direct interpolation") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int size : {1, 2, 7, 100}) {
        std::vector<double> xs(static_cast<std::size_t>(size));
        for (double& x : xs) x = u(gen);
        std::sort(xs.begin(), xs.end());
        for (double prob : {0.0, 0.05, 0.25, 0.5, 0.9, 1.0}) {
            const double pos = prob * (size - 1);
            const int below = static_cast<int>(pos);
            const double frac = pos - below;
            const double hi = xs[static_cast<std::size_t>(std::min(below + 1, size - 1))];
            const double expect = (1.0 - frac) * xs[static_cast<std::size_t>(below)] + frac * hi;
            CHECK(ab::quantile_sorted(xs, prob) == doctest::Approx(expect));
        }
    }
    CHECK(kind_of([] { ab::quantile_sorted(std::vector<double>{}, 0.5); }) == ab::ErrorKind::EmptyInput);
}

TEST_CASE("summaries over trial records") {
    ab::TrialRecord one;
    one.max_size = 5;
    const std::vector<ab::TrialRecord> single{one};
    const auto s = ab::summarize(single, 10);
    CHECK(s.trials == 1);
    CHECK(s.mean == 0.5);
    CHECK(s.stddev == 0.0);

    std::vector<ab::TrialRecord> same(8, one);
    const std::vector<double> thresholds{5.0, 6.0};
    const auto c = ab::summarize(same, 5, thresholds);
    CHECK(c.mean == 1.0);
    CHECK(c.stddev == 0.0);
    CHECK(c.mean_ci.low == 1.0);
    for (const auto& [prob, value] : c.quantiles) CHECK(value == 1.0);
    REQUIRE(c.failures.size() == 2);
    CHECK(c.failures[0].count == 0);  // 5 is not below 5
    CHECK(c.failures[1].count == 8);
    CHECK(c.failures[1].frequency == 1.0);

    std::vector<ab::TrialRecord> mixed;
    for (std::size_t v : {2u, 4u, 4u, 6u}) {
        ab::TrialRecord r;
        r.max_size = v;
        mixed.push_back(r);
    }
    const auto m = ab::summarize(mixed, 8);
    CHECK(m.mean == doctest::Approx(0.5));
    // Sample sd of {2,4,4,6}/8.
    CHECK(m.stddev == doctest::Approx(std::sqrt(8.0 / 3.0) / 8.0));

    CHECK(kind_of([] { ab::summarize(std::vector<ab::TrialRecord>{}, 3); }) == ab::ErrorKind::EmptyInput);
    CHECK(kind_of([] { ab::describe_sample(std::vector<double>{}); }) == ab::ErrorKind::EmptyInput);
}
