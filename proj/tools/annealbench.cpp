#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "annealbench/alpha.hpp"
#include "annealbench/errors.hpp"
#include "annealbench/graph.hpp"
#include "annealbench/harness.hpp"
#include "annealbench/instances.hpp"
#include "annealbench/schedule.hpp"
#include "annealbench/trials.hpp"

namespace ab = annealbench;
namespace fs = std::filesystem;

namespace {

ab::ParamMap parse_params(const std::vector<std::string>& items) {
    ab::ParamMap params;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ab::Error(ab::ErrorKind::ConfigError, fmt::format("parameter '{}' is not key=value", item));
        params[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return params;
}

/// formula_alpha from "<graph>.meta" when the sidecar exists.
std::optional<std::size_t> sidecar_alpha(const std::string& graph_path) {
    const std::string meta = graph_path + ".meta";
    if (!fs::exists(meta)) return std::nullopt;
    const std::string text = ab::read_text_file(meta);
    const std::string key = "formula_alpha = ";
    const auto pos = text.find(key);
    if (pos == std::string::npos) return std::nullopt;
    return static_cast<std::size_t>(std::stoull(text.substr(pos + key.size())));
}

int cmd_gen(const std::string& family, const std::vector<std::string>& raw, std::uint64_t seed, const std::string& out) {
    const ab::Instance inst = ab::make_instance(family, parse_params(raw), seed);
    ab::save_graph(out, inst.simulated_graph());
    ab::save_metadata(out + ".meta", inst);
    std::cout << fmt::format("wrote {} ({} vertices{}) and {}.meta\n", out, inst.simulated_graph().num_vertices(),
                             inst.implicit ? ", base of an implicit blowup" : "", out);
    return 0;
}

int cmd_alpha(const std::string& graph_path, bool show_witness) {
    const ab::Graph g = ab::load_graph(graph_path);
    const ab::AlphaCertificate cert = ab::alpha_auto(g);
    std::cout << fmt::format("alpha = {}\nmethod = {}\n", cert.alpha, ab::to_string(cert.method));
    if (show_witness && cert.witness) {
        std::cout << "witness =";
        for (auto v : *cert.witness) std::cout << ' ' << v;
        std::cout << '\n';
    }
    return 0;
}

struct RunArgs {
    std::string graph;
    std::string schedule;
    std::uint64_t steps = 0;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::optional<ab::VertexId> watch;
    std::vector<std::uint64_t> probe_steps;
    std::string probes_out;
    bool track_clouds = false;
};

int cmd_run(const RunArgs& a) {
    const ab::Graph g = ab::load_graph(a.graph);
    const auto sched = ab::parse_schedule(a.schedule);
    const std::size_t alpha = sidecar_alpha(a.graph).value_or(ab::alpha_auto(g).alpha);
    ab::RecorderConfig rec;
    rec.watch_vertex = a.watch;
    rec.probe_steps = a.probe_steps;
    rec.track_clouds = a.track_clouds;
    rec.keep_snapshots = false;
    const bool greedy = sched.kind() == ab::FugacitySchedule::Kind::infinite && a.steps == 0;
    const ab::TrialKernel kernel = [&](std::uint64_t, std::uint64_t seed) {
        return greedy ? ab::run_randomized_greedy(g, seed).record : ab::run_ump(g, sched, a.steps, seed, rec);
    };
    const auto records = ab::run_trials_parallel(a.trials, a.seed, kernel);
    std::vector<ab::RunRow> rows;
    std::vector<ab::ProbeRow> probes;
    for (const auto& r : records) {
        rows.push_back(ab::make_run_row(r, alpha));
        for (const auto& p : r.probes) probes.push_back({r.trial_id, p.step, p.size, p.occ_left, p.occ_right});
    }
    ab::write_text_file(a.out, ab::format_run_csv(rows));
    if (!a.probes_out.empty()) ab::write_text_file(a.probes_out, ab::format_probe_csv(probes));
    const auto s = ab::summarize_rows(a.schedule, rows);
    std::cout << fmt::format("{} trials, alpha {}, mean ratio {:.4f} [{:.4f}, {:.4f}]\n", s.trials, s.alpha, s.mean_ratio,
                             s.ci_low, s.ci_high);
    return 0;
}

int cmd_experiment(const std::string& path, const std::string& out_override, int workers, bool serial) {
    ab::ExperimentConfig cfg = ab::load_config(path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    ab::RunOptions opts;
    opts.workers = workers;
    opts.serial = serial;
    const auto man = ab::run_experiment(cfg, opts);
    std::cout << fmt::format("{}: alpha {}, mode {}, {:.2f} s\n", man.name, man.alpha, man.run_mode, man.wall_seconds);
    for (const auto& r : man.results)
        std::cout << fmt::format("  {:<16} mean ratio {:.4f}  max size {:.1f}  root added {:.3f}\n", r.label,
                                 r.summary.mean_ratio, r.summary.mean_max_size, r.summary.root_added_frac);
    std::cout << ab::format_verdict_text(man.verdicts);
    return man.all_pass ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& csvs, const std::vector<std::string>& raw_checks,
               const std::vector<std::string>& probe_files, const std::string& out_dir) {
    std::vector<std::pair<std::string, std::string>> checks;
    for (const auto& c : raw_checks) {
        const auto eq = c.find('=');
        // "name=expr"; an expression alone is named by itself.
        const bool named = eq != std::string::npos && eq > 0 && c.find_first_of("<>(") > eq && c[eq + 1] != '=';
        checks.emplace_back(named ? c.substr(0, eq) : c, named ? c.substr(eq + 1) : c);
    }
    std::map<std::string, std::vector<ab::ProbeRow>> probes_by_label;
    for (const auto& p : probe_files) {
        std::string stem = fs::path(p).stem().string();
        if (stem.size() > 7 && stem.ends_with(".probes")) stem.resize(stem.size() - 7);
        probes_by_label[stem] = ab::parse_probe_csv(ab::read_text_file(p));
    }
    std::vector<ab::SummaryRow> summaries;
    std::vector<ab::Verdict> verdicts;
    for (const auto& csv : csvs) {
        const std::string label = fs::path(csv).stem().string();
        const auto rows = ab::parse_run_csv(ab::read_text_file(csv));
        summaries.push_back(ab::summarize_rows(label, rows));
        const auto& probes = probes_by_label[label];
        for (const auto& [name, expr] : checks) verdicts.push_back(ab::evaluate_check(name, expr, label, rows, probes));
    }
    const std::string summary = ab::format_summary_csv(summaries);
    const std::string text = ab::format_verdict_text(verdicts);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        ab::write_text_file((fs::path(out_dir) / "summary.csv").string(), summary);
        ab::write_text_file((fs::path(out_dir) / "verdicts.csv").string(), ab::format_verdict_csv(verdicts));
        ab::write_text_file((fs::path(out_dir) / "verdicts.txt").string(), text);
    }
    std::cout << summary << text;
    bool ok = true;
    for (const auto& v : verdicts) ok = ok && v.pass;
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metropolis and annealing lab for maximum independent set"};
    app.set_version_flag("--version", ab::tool_version());
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Generate an instance and its metadata sidecar");
    std::string family, gen_out;
    std::vector<std::string> gen_params;
    std::uint64_t gen_seed = 0;
    gen->add_option("family", family, "Instance family")->required();
    gen->add_option("params", gen_params, "Generator parameters as key=value");
    gen->add_option("--seed", gen_seed, "Instance seed");
    gen->add_option("-o,--out", gen_out, "Graph file to write")->required();

    auto* run = app.add_subcommand("run", "Run independent trials of one schedule on a graph file");
    RunArgs ra;
    run->add_option("--graph", ra.graph, "Graph file")->required()->check(CLI::ExistingFile);
    run->add_option("--schedule", ra.schedule, "fixed:L | greedy | seq:FILE | anneal:L0:L1:T | adaptive:NAME")->required();
    run->add_option("--steps", ra.steps, "Steps per trial (0 with greedy runs one randomized greedy pass)")->required();
    run->add_option("--trials", ra.trials, "Number of trials")->check(CLI::PositiveNumber);
    run->add_option("--seed", ra.seed, "Master seed");
    run->add_option("--out", ra.out, "Run CSV to write")->required();
    run->add_option("--watch", ra.watch, "Vertex reported in root_added");
    run->add_option("--probe-steps", ra.probe_steps, "Steps at which the state is probed")->delimiter(',');
    run->add_option("--probes-out", ra.probes_out, "Probe CSV to write");
    run->add_flag("--track-clouds", ra.track_clouds, "Count cloud deloads using vertex groups");

    auto* alpha = app.add_subcommand("alpha", "Exact independence number where tractable");
    std::string alpha_graph;
    bool witness = false;
    alpha->add_option("graph", alpha_graph, "Graph file")->required()->check(CLI::ExistingFile);
    alpha->add_flag("--witness", witness, "Print a maximum independent set");

    auto* exp = app.add_subcommand("experiment", "Run a configured experiment and its checks");
    std::string cfg_path, exp_out;
    int workers = 0;
    bool serial = false;
    exp->add_option("config", cfg_path, "Experiment config")->required()->check(CLI::ExistingFile);
    exp->add_option("--out", exp_out, "Override output_dir");
    exp->add_option("--workers", workers, "Worker threads (overrides ANNEALBENCH_WORKERS)");
    exp->add_flag("--serial", serial, "Use the serial trial loop");

    auto* report = app.add_subcommand("report", "Summarize run CSVs and evaluate checks");
    std::vector<std::string> csvs, checks, probe_files;
    std::string report_out;
    report->add_option("csv", csvs, "Run CSVs; the file stem labels the schedule")->required()->check(CLI::ExistingFile);
    report->add_option("--check", checks, "name=expression, e.g. ok=mean(ratio) <= 0.3");
    report->add_option("--probes", probe_files, "Probe CSVs named <label>.probes.csv")->check(CLI::ExistingFile);
    report->add_option("--out", report_out, "Directory for summary.csv and verdicts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return cmd_gen(family, gen_params, gen_seed, gen_out);
        if (*run) return cmd_run(ra);
        if (*alpha) return cmd_alpha(alpha_graph, witness);
        if (*exp) return cmd_experiment(cfg_path, exp_out, workers, serial);
        if (*report) return cmd_report(csvs, checks, probe_files, report_out);
    } catch (const ab::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
