#include "annealbench/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "annealbench/alpha.hpp"
#include "annealbench/errors.hpp"
#include "annealbench/oracles.hpp"
#include "annealbench/schedule.hpp"
#include "annealbench/trials.hpp"

namespace annealbench {

std::string tool_version() { return std::string("annealbench ") + ANNEALBENCH_VERSION; }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path));
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, fmt::format("cannot write '{}'", path));
    out << text;
    if (!out) throw Error(ErrorKind::IoError, fmt::format("write failed for '{}'", path));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
    text = trim(text);
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
        if (text == "inf" || text == "infinity") return std::numeric_limits<T>::infinity();
        const std::string copy(text);
        char* end = nullptr;
        value = static_cast<T>(std::strtod(copy.c_str(), &end));
        if (copy.empty() || end != copy.c_str() + copy.size())
            throw Error(ErrorKind::ConfigError, fmt::format("bad {} '{}'", what, text));
    } else {
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw Error(ErrorKind::ConfigError, fmt::format("bad {} '{}'", what, text));
    }
    return value;
}

/// Counts like 1e6 are accepted when they are exact integers.
std::uint64_t parse_count(std::string_view text, std::string_view what) {
    text = trim(text);
    if (text.find_first_of(".eE") != std::string_view::npos) {
        const double v = parse_number<double>(text, what);
        if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19)
            throw Error(ErrorKind::ConfigError, fmt::format("bad {} '{}'", what, text));
        return static_cast<std::uint64_t>(v);
    }
    return parse_number<std::uint64_t>(text, what);
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view text, Parse parse) {
    std::vector<T> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.push_back(parse(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_bool(std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw Error(ErrorKind::ConfigError, fmt::format("bad boolean '{}'", text));
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::string section;
    std::size_t line_no = 0;
    for (std::string_view raw_line : split_lines(text)) {
        ++line_no;
        std::string_view line = raw_line;
        // '#' starts a comment at the beginning of a line or after whitespace.
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw Error(ErrorKind::ConfigError, fmt::format("line {}: bad section header", line_no));
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "instance" && section != "schedules" && section != "record" && section != "checks")
                throw Error(ErrorKind::ConfigError, fmt::format("line {}: unknown section [{}]", line_no, section));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw Error(ErrorKind::ConfigError, fmt::format("line {}: expected key = value", line_no));
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw Error(ErrorKind::ConfigError, fmt::format("line {}: empty key", line_no));
        const std::string full = section.empty() ? key : section + "." + key;
        for (const auto& [k, v] : cfg.raw)
            if (k == full) throw Error(ErrorKind::ConfigError, fmt::format("line {}: duplicate key '{}'", line_no, full));
        cfg.raw.emplace_back(full, value);

        if (section.empty()) {
            if (key == "name") cfg.name = value;
            else if (key == "seed") cfg.seed = parse_count(value, "seed");
            else if (key == "trials") cfg.trials = parse_count(value, "trials");
            else if (key == "steps") cfg.steps = parse_count(value, "steps");
            else if (key == "mode") cfg.mode = value;
            else if (key == "horizon") cfg.horizon = parse_number<double>(value, "horizon");
            else if (key == "output_dir") cfg.output_dir = value;
            else if (key == "workers") cfg.workers = static_cast<int>(parse_count(value, "workers"));
            else throw Error(ErrorKind::ConfigError, fmt::format("line {}: unknown key '{}'", line_no, key));
        } else if (section == "instance") {
            if (key == "family") cfg.family = value;
            else if (key == "seed") cfg.instance_seed = parse_count(value, "instance seed");
            else cfg.instance_params[key] = value;
        } else if (section == "schedules") {
            cfg.schedules.emplace_back(key, value);
        } else if (section == "checks") {
            cfg.checks.emplace_back(key, value);
        } else {  // record
            auto& r = cfg.record;
            if (key == "thresholds") {
                r.thresholds = parse_list<std::size_t>(value, [](std::string_view s) { return parse_count(s, "threshold"); });
            } else if (key == "probe_steps") {
                r.probe_steps = parse_list<std::uint64_t>(value, [](std::string_view s) { return parse_count(s, "probe step"); });
            } else if (key == "probe_times") {
                r.probe_times = parse_list<double>(value, [](std::string_view s) { return parse_number<double>(s, "probe time"); });
            } else if (key == "watch") {
                r.watch_vertex = static_cast<VertexId>(parse_count(value, "watch vertex"));
            } else if (key == "track_clouds") {
                r.track_clouds = parse_bool(value);
            } else if (key == "stop_at_size") {
                r.stop_at_size = parse_count(value, "stop size");
            } else if (key == "snapshot_every") {
                r.snapshot_every = parse_count(value, "snapshot period");
            } else if (key == "check_independence") {
                r.check_independence = parse_bool(value);
            } else {
                throw Error(ErrorKind::ConfigError, fmt::format("line {}: unknown record key '{}'", line_no, key));
            }
        }
    }
    if (cfg.name.empty()) throw Error(ErrorKind::ConfigError, "missing experiment name");
    if (cfg.family.empty()) throw Error(ErrorKind::ConfigError, "missing [instance] family");
    if (cfg.trials == 0) throw Error(ErrorKind::ConfigError, "trials must be at least 1");
    if (cfg.steps == 0) throw Error(ErrorKind::ConfigError, "steps must be at least 1");
    if (cfg.mode != "auto" && cfg.mode != "discrete" && cfg.mode != "ct" && cfg.mode != "greedy")
        throw Error(ErrorKind::ConfigError, fmt::format("unknown mode '{}'", cfg.mode));
    if (cfg.schedules.empty()) throw Error(ErrorKind::ConfigError, "no [schedules] given");
    for (const auto& [label, spec] : cfg.schedules) {
        if (label.find_first_of("/\\ ") != std::string::npos)
            throw Error(ErrorKind::ConfigError, fmt::format("schedule label '{}' is not a valid file stem", label));
        try {
            (void)parse_schedule(spec);
        } catch (const Error& e) {
            throw Error(ErrorKind::ConfigError, fmt::format("schedule '{}': {}", label, e.what()));
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

std::string canonical_config(const ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [k, v] : cfg.raw) {
        if (k == "output_dir" || k == "workers") continue;
        entries.emplace_back(k, v);
    }
    std::sort(entries.begin(), entries.end());
    std::string out;
    for (const auto& [k, v] : entries) out += k + "=" + v + "\n";
    return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a(canonical_config(cfg)); }

RunRow make_run_row(const TrialRecord& record, std::size_t alpha) {
    RunRow row;
    row.trial_id = record.trial_id;
    row.seed = record.seed;
    row.steps = record.steps;
    row.max_size = record.max_size;
    row.step_of_max = record.step_of_max;
    row.alpha = alpha;
    row.ratio = alpha ? static_cast<double>(record.max_size) / static_cast<double>(alpha) : 0.0;
    row.root_added = record.root_added;
    row.deload_final = record.deload_final;
    return row;
}

namespace {

std::vector<std::vector<std::string_view>> parse_plain_csv(std::string_view text, std::string_view header, std::size_t columns) {
    const auto lines = split_lines(text);
    std::size_t i = 0;
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
    if (i == lines.size() || trim(lines[i]) != header)
        throw Error(ErrorKind::IoError, fmt::format("CSV header must be '{}'", header));
    std::vector<std::vector<std::string_view>> rows;
    for (++i; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != columns)
            throw Error(ErrorKind::IoError, fmt::format("CSV line {} has {} fields, expected {}", i + 1, fields.size(), columns));
        rows.push_back(std::move(fields));
    }
    return rows;
}

template <typename T>
T csv_number(std::string_view s) {
    try {
        return parse_number<T>(s, "CSV field");
    } catch (const Error& e) {
        throw Error(ErrorKind::IoError, e.what());
    }
}

}  // namespace

std::string format_run_csv(std::span<const RunRow> rows) {
    std::string out(kRunCsvHeader);
    out += '\n';
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{},{:.6f},{},{}\n", r.trial_id, r.seed, r.steps, r.max_size, r.step_of_max,
                           r.alpha, r.ratio, r.root_added ? 1 : 0, r.deload_final);
    return out;
}

std::vector<RunRow> parse_run_csv(std::string_view text) {
    std::vector<RunRow> rows;
    for (const auto& f : parse_plain_csv(text, kRunCsvHeader, 9)) {
        RunRow r;
        r.trial_id = csv_number<std::uint64_t>(f[0]);
        r.seed = csv_number<std::uint64_t>(f[1]);
        r.steps = csv_number<std::uint64_t>(f[2]);
        r.max_size = csv_number<std::size_t>(f[3]);
        r.step_of_max = csv_number<std::uint64_t>(f[4]);
        r.alpha = csv_number<std::size_t>(f[5]);
        r.ratio = csv_number<double>(f[6]);
        r.root_added = csv_number<int>(f[7]) != 0;
        r.deload_final = csv_number<std::uint64_t>(f[8]);
        rows.push_back(r);
    }
    return rows;
}

std::string format_probe_csv(std::span<const ProbeRow> rows) {
    std::string out(kProbeCsvHeader);
    out += '\n';
    for (const auto& r : rows) out += fmt::format("{},{},{},{},{}\n", r.trial_id, r.step, r.size, r.occ_l, r.occ_r);
    return out;
}

std::vector<ProbeRow> parse_probe_csv(std::string_view text) {
    std::vector<ProbeRow> rows;
    for (const auto& f : parse_plain_csv(text, kProbeCsvHeader, 5)) {
        rows.push_back({csv_number<std::uint64_t>(f[0]), csv_number<std::uint64_t>(f[1]), csv_number<std::size_t>(f[2]),
                        csv_number<std::size_t>(f[3]), csv_number<std::size_t>(f[4])});
    }
    return rows;
}

namespace {

bool compare(double lhs, std::string_view op, double rhs) {
    if (op == "<") return lhs < rhs;
    if (op == "<=") return lhs <= rhs;
    if (op == ">") return lhs > rhs;
    if (op == ">=") return lhs >= rhs;
    return lhs == rhs;
}

double run_column(const RunRow& r, std::string_view col) {
    if (col == "steps") return static_cast<double>(r.steps);
    if (col == "max_size") return static_cast<double>(r.max_size);
    if (col == "step_of_max") return static_cast<double>(r.step_of_max);
    if (col == "alpha") return static_cast<double>(r.alpha);
    if (col == "ratio") return r.ratio;
    if (col == "root_added") return r.root_added ? 1.0 : 0.0;
    if (col == "deload_final") return static_cast<double>(r.deload_final);
    throw Error(ErrorKind::ConfigError, fmt::format("unknown run column '{}'", col));
}

double probe_column(const ProbeRow& r, std::string_view col) {
    if (col == "size") return static_cast<double>(r.size);
    if (col == "occ_l") return static_cast<double>(r.occ_l);
    if (col == "occ_r") return static_cast<double>(r.occ_r);
    throw Error(ErrorKind::ConfigError, fmt::format("unknown probe column '{}'", col));
}

const std::string kOp = R"((<=|>=|==|<|>))";
const std::string kNum = R"(([-+]?(?:inf|[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)))";

}  // namespace

Verdict evaluate_check(const std::string& check, const std::string& expression, const std::string& schedule,
                       std::span<const RunRow> rows, std::span<const ProbeRow> probes) {
    static const std::regex mean_re(R"(^\s*mean\(\s*(\w+)\s*\)\s*)" + kOp + R"(\s*)" + kNum + R"(\s*$)");
    static const std::regex frac_re(R"(^\s*frac\(\s*(\w+)\s*)" + kOp + R"(\s*)" + kNum + R"(\s*\)\s*)" + kOp + R"(\s*)" +
                                    kNum + R"(\s*$)");
    static const std::regex pfrac_re(R"(^\s*pfrac\(\s*([0-9]+)\s*,\s*(\w+)\s*)" + kOp + R"(\s*)" + kNum +
                                     R"(\s*\)\s*)" + kOp + R"(\s*)" + kNum + R"(\s*$)");
    Verdict v;
    v.check = check;
    v.schedule = schedule;
    v.expression = expression;
    std::smatch m;
    if (std::regex_match(expression, m, mean_re)) {
        if (rows.empty()) throw Error(ErrorKind::IncompleteRun, fmt::format("check '{}' has no rows for '{}'", check, schedule));
        double sum = 0.0;
        for (const auto& r : rows) sum += run_column(r, m[1].str());
        v.observed = sum / static_cast<double>(rows.size());
        v.op = m[2].str();
        v.threshold = parse_number<double>(m[3].str(), "threshold");
    } else if (std::regex_match(expression, m, frac_re)) {
        if (rows.empty()) throw Error(ErrorKind::IncompleteRun, fmt::format("check '{}' has no rows for '{}'", check, schedule));
        const std::string col = m[1].str(), inner = m[2].str();
        const double x = parse_number<double>(m[3].str(), "value");
        std::size_t hits = 0;
        for (const auto& r : rows) hits += compare(run_column(r, col), inner, x);
        v.observed = static_cast<double>(hits) / static_cast<double>(rows.size());
        v.op = m[4].str();
        v.threshold = parse_number<double>(m[5].str(), "threshold");
    } else if (std::regex_match(expression, m, pfrac_re)) {
        const std::uint64_t step = parse_count(m[1].str(), "probe step");
        const std::string col = m[2].str(), inner = m[3].str();
        const double x = parse_number<double>(m[4].str(), "value");
        std::size_t total = 0, hits = 0;
        for (const auto& p : probes) {
            if (p.step != step) continue;
            ++total;
            hits += compare(probe_column(p, col), inner, x);
        }
        if (total == 0)
            throw Error(ErrorKind::IncompleteRun, fmt::format("check '{}' needs probes at step {} for '{}'", check, step, schedule));
        v.observed = static_cast<double>(hits) / static_cast<double>(total);
        v.op = m[5].str();
        v.threshold = parse_number<double>(m[6].str(), "threshold");
    } else {
        throw Error(ErrorKind::ConfigError, fmt::format("check '{}': cannot parse '{}'", check, expression));
    }
    v.pass = compare(v.observed, v.op, v.threshold);
    v.margin = (v.op == "<" || v.op == "<=") ? v.threshold - v.observed
               : (v.op == "==")             ? -std::abs(v.observed - v.threshold)
                                            : v.observed - v.threshold;
    return v;
}

namespace {

std::string csv_quote(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_quoted(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

constexpr std::string_view kVerdictHeader = "check,schedule,expression,observed,op,threshold,margin,pass";

}  // namespace

std::string format_verdict_csv(std::span<const Verdict> verdicts) {
    std::string out(kVerdictHeader);
    out += '\n';
    for (const auto& v : verdicts)
        out += fmt::format("{},{},{},{},{},{},{},{}\n", csv_quote(v.check), csv_quote(v.schedule), csv_quote(v.expression),
                           v.observed, v.op, v.threshold, v.margin, v.pass ? "pass" : "fail");
    return out;
}

std::vector<Verdict> parse_verdict_csv(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != kVerdictHeader)
        throw Error(ErrorKind::IoError, fmt::format("verdict CSV header must be '{}'", kVerdictHeader));
    std::vector<Verdict> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto f = split_quoted(line);
        if (f.size() != 8) throw Error(ErrorKind::IoError, fmt::format("verdict line {} has {} fields", i + 1, f.size()));
        Verdict v;
        v.check = f[0];
        v.schedule = f[1];
        v.expression = f[2];
        v.observed = csv_number<double>(f[3]);
        v.op = f[4];
        v.threshold = csv_number<double>(f[5]);
        v.margin = csv_number<double>(f[6]);
        if (f[7] != "pass" && f[7] != "fail") throw Error(ErrorKind::IoError, fmt::format("bad verdict '{}'", f[7]));
        v.pass = f[7] == "pass";
        out.push_back(std::move(v));
    }
    return out;
}

std::string format_verdict_text(std::span<const Verdict> verdicts) {
    std::string out;
    for (const auto& v : verdicts)
        out += fmt::format("{} {} [{}]: {} (observed {:.6g}, margin {:+.6g})\n", v.pass ? "PASS" : "FAIL", v.check,
                           v.schedule, v.expression, v.observed, v.margin);
    return out;
}

SummaryRow summarize_rows(const std::string& schedule, std::span<const RunRow> rows) {
    if (rows.empty()) throw Error(ErrorKind::EmptyInput, fmt::format("no rows for '{}'", schedule));
    std::vector<double> ratios;
    ratios.reserve(rows.size());
    SummaryRow s;
    s.schedule = schedule;
    s.trials = rows.size();
    s.alpha = rows.front().alpha;
    double size_sum = 0.0, root = 0.0, deload = 0.0;
    for (const auto& r : rows) {
        ratios.push_back(r.alpha ? static_cast<double>(r.max_size) / static_cast<double>(r.alpha) : 0.0);
        size_sum += static_cast<double>(r.max_size);
        root += r.root_added ? 1.0 : 0.0;
        deload += static_cast<double>(r.deload_final);
    }
    const SummaryStats stats = describe_sample(ratios);
    const double n = static_cast<double>(rows.size());
    s.mean_ratio = stats.mean;
    s.sd_ratio = stats.stddev;
    s.ci_low = stats.mean_ci.low;
    s.ci_high = stats.mean_ci.high;
    std::sort(ratios.begin(), ratios.end());
    s.q05 = quantile_sorted(ratios, 0.05);
    s.q50 = quantile_sorted(ratios, 0.5);
    s.q95 = quantile_sorted(ratios, 0.95);
    s.mean_max_size = size_sum / n;
    s.root_added_frac = root / n;
    s.mean_deload = deload / n;
    return s;
}

std::string format_summary_csv(std::span<const SummaryRow> rows) {
    std::string out =
        "schedule,trials,alpha,mean_ratio,sd_ratio,ci_low,ci_high,q05,q50,q95,mean_max_size,root_added_frac,mean_deload\n";
    for (const auto& s : rows)
        out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.4f},{:.4f},{:.4f}\n",
                           csv_quote(s.schedule), s.trials, s.alpha, s.mean_ratio, s.sd_ratio, s.ci_low, s.ci_high, s.q05,
                           s.q50, s.q95, s.mean_max_size, s.root_added_frac, s.mean_deload);
    return out;
}

std::string format_manifest(const ExperimentManifest& m) {
    std::string out;
    out += fmt::format("name = {}\n", m.name);
    out += fmt::format("config_hash = {:016x}\n", m.config_hash);
    out += fmt::format("tool_version = {}\n", m.tool_version);
    out += fmt::format("master_seed = {}\n", m.master_seed);
    out += fmt::format("run_mode = {}\n", m.run_mode);
    out += fmt::format("alpha = {}\n", m.alpha);
    out += fmt::format("wall_seconds = {:.3f}\n", m.wall_seconds);
    for (std::size_t i = 0; i < m.trial_seeds.size(); ++i) out += fmt::format("trial_seed.{} = {}\n", i, m.trial_seeds[i]);
    for (const auto& f : m.outputs) out += fmt::format("output = {}\n", f);
    out += fmt::format("all_pass = {}\n", m.all_pass ? "true" : "false");
    return out;
}

ExperimentManifest run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    ExperimentManifest man;
    man.config_hash = config_hash(cfg);
    man.tool_version = tool_version();
    man.name = cfg.name;
    man.master_seed = cfg.seed;

    Instance inst;
    try {
        inst = make_instance(cfg.family, cfg.instance_params, cfg.instance_seed.value_or(cfg.seed));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::IoError) throw;
        throw Error(ErrorKind::ConfigError, fmt::format("instance: {}", e.what()));
    }
    const Graph& g = inst.simulated_graph();
    man.alpha = inst.formula_alpha ? *inst.formula_alpha : alpha_auto(g).alpha;

    std::string mode = cfg.mode;
    if (mode == "auto") mode = inst.implicit ? "ct" : "discrete";
    if (mode == "ct" && !inst.cliques)
        throw Error(ErrorKind::ConfigError, "mode ct needs a clique_blowup instance");
    man.run_mode = mode;

    int workers = options.workers;
    if (workers <= 0 && cfg.workers > 0 && !std::getenv("ANNEALBENCH_WORKERS")) workers = cfg.workers;
    if (workers <= 0) workers = default_workers();

    for (std::size_t i = 0; i < cfg.trials; ++i) man.trial_seeds.push_back(trial_seed(cfg.seed, i));

    std::filesystem::path dir;
    if (options.write_files && !cfg.output_dir.empty()) {
        dir = cfg.output_dir;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw Error(ErrorKind::IoError, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
        const auto meta = (dir / "instance.meta").string();
        save_metadata(meta, inst);
        man.outputs.push_back("instance.meta");
    }

    std::vector<SummaryRow> summaries;
    for (const auto& [label, spec] : cfg.schedules) {
        const FugacitySchedule sched = parse_schedule(spec);
        TrialKernel kernel;
        if (mode == "greedy") {
            kernel = [&](std::uint64_t, std::uint64_t seed) { return run_randomized_greedy(g, seed).record; };
        } else if (mode == "ct") {
            const double horizon = cfg.horizon.value_or(std::numeric_limits<double>::infinity());
            const WeightedCTConfig ct = clique_blowup_ct_config(inst.base, inst.cliques->ell, horizon, cfg.steps);
            kernel = [&, ct](std::uint64_t, std::uint64_t seed) { return run_ct_ump(inst.base, ct, sched, seed, cfg.record); };
        } else {
            kernel = [&](std::uint64_t, std::uint64_t seed) { return run_ump(g, sched, cfg.steps, seed, cfg.record); };
        }
        const auto records = options.serial ? run_trials_serial(cfg.trials, cfg.seed, kernel)
                                            : run_trials_parallel(cfg.trials, cfg.seed, kernel, workers);
        ScheduleResult res;
        res.label = label;
        res.spec = spec;
        for (const auto& r : records) {
            res.rows.push_back(make_run_row(r, man.alpha));
            for (const auto& p : r.probes) res.probes.push_back({r.trial_id, p.step, p.size, p.occ_left, p.occ_right});
        }
        res.summary = summarize_rows(label, res.rows);
        summaries.push_back(res.summary);
        for (const auto& [check, expr] : cfg.checks) {
            man.verdicts.push_back(evaluate_check(check, expr, label, res.rows, res.probes));
            man.all_pass = man.all_pass && man.verdicts.back().pass;
        }
        if (!dir.empty()) {
            write_text_file((dir / (label + ".csv")).string(), format_run_csv(res.rows));
            man.outputs.push_back(label + ".csv");
            if (!cfg.record.probe_steps.empty()) {
                write_text_file((dir / (label + ".probes.csv")).string(), format_probe_csv(res.probes));
                man.outputs.push_back(label + ".probes.csv");
            }
        }
        man.results.push_back(std::move(res));
    }

    man.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (!dir.empty()) {
        write_text_file((dir / "summary.csv").string(), format_summary_csv(summaries));
        write_text_file((dir / "verdicts.csv").string(), format_verdict_csv(man.verdicts));
        write_text_file((dir / "verdicts.txt").string(), format_verdict_text(man.verdicts));
        man.outputs.insert(man.outputs.end(), {"summary.csv", "verdicts.csv", "verdicts.txt", "manifest.txt"});
        write_text_file((dir / "manifest.txt").string(), format_manifest(man));
    }
    return man;
}

}  // namespace annealbench
