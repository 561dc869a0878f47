#include "annealbench/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "annealbench/errors.hpp"

namespace annealbench {

namespace {

void require_fugacity(double lambda) {
    if (!(lambda >= 1.0))
        throw Error(ErrorKind::InvalidFugacity, fmt::format("fugacity {} outside [1, inf]", lambda));
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorKind::ConfigError, fmt::format("bad {} '{}'", what, text));
    return value;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorKind::ConfigError, fmt::format("bad {} '{}'", what, text));
    return value;
}

std::string format_lambda(double lambda) { return std::isinf(lambda) ? "inf" : fmt::format("{}", lambda); }

std::vector<double> read_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open schedule file '{}'", path));
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        values.push_back(parse_fugacity(std::string_view(line).substr(first, last - first + 1)));
    }
    if (values.empty()) throw Error(ErrorKind::ConfigError, fmt::format("schedule file '{}' has no values", path));
    return values;
}

}  // namespace

double parse_fugacity(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "Inf") return kInfiniteFugacity;
    const double lambda = parse_double(text, "fugacity");
    require_fugacity(lambda);
    return lambda;
}

FugacitySchedule FugacitySchedule::fixed(double lambda) {
    require_fugacity(lambda);
    FugacitySchedule s;
    s.kind_ = std::isinf(lambda) ? Kind::infinite : Kind::fixed;
    s.lambda_ = lambda;
    return s;
}

FugacitySchedule FugacitySchedule::infinite() { return FugacitySchedule{}; }

FugacitySchedule FugacitySchedule::sequence(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorKind::ConfigError, "empty fugacity sequence");
    for (double v : values) require_fugacity(v);
    FugacitySchedule s;
    s.kind_ = Kind::sequence;
    s.values_ = std::make_shared<const std::vector<double>>(std::move(values));
    return s;
}

FugacitySchedule FugacitySchedule::anneal(double lambda0, double lambda1, std::uint64_t length) {
    require_fugacity(lambda0);
    require_fugacity(lambda1);
    if (std::isinf(lambda0) || std::isinf(lambda1))
        throw Error(ErrorKind::ConfigError, "anneal endpoints must be finite");
    if (length == 0) throw Error(ErrorKind::ConfigError, "anneal length must be positive");
    FugacitySchedule s;
    s.kind_ = Kind::anneal;
    s.lambda_ = lambda0;
    s.lambda1_ = lambda1;
    s.length_ = length;
    s.log_ratio_ = std::log(lambda1 / lambda0);
    return s;
}

FugacitySchedule FugacitySchedule::adaptive(std::string name, AdaptiveRule rule) {
    FugacitySchedule s;
    s.kind_ = Kind::adaptive;
    s.name_ = std::move(name);
    s.rule_ = std::move(rule);
    return s;
}

double FugacitySchedule::at(std::uint64_t t) const {
    switch (kind_) {
    case Kind::fixed:
    case Kind::infinite:
        return lambda_;
    case Kind::sequence: {
        const auto& v = *values_;
        const std::uint64_t i = t == 0 ? 0 : t - 1;
        return i < v.size() ? v[i] : v.back();
    }
    case Kind::anneal: {
        if (length_ <= 1 || t >= length_) return lambda1_;
        const double frac = static_cast<double>(t == 0 ? 0 : t - 1) / static_cast<double>(length_ - 1);
        return std::max(1.0, lambda_ * std::exp(log_ratio_ * frac));
    }
    case Kind::adaptive:
        throw Error(ErrorKind::InvalidArgument, "adaptive schedule needs a history digest");
    }
    return lambda_;
}

std::string FugacitySchedule::describe() const {
    switch (kind_) {
    case Kind::fixed: return "fixed:" + format_lambda(lambda_);
    case Kind::infinite: return "greedy";
    case Kind::sequence: {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (double v : *values_) {
            for (char c : format_lambda(v) + "\n") {
                h ^= static_cast<unsigned char>(c);
                h *= 0x100000001b3ULL;
            }
        }
        return fmt::format("seq[{}]#{:016x}", values_->size(), h);
    }
    case Kind::anneal: return fmt::format("anneal:{}:{}:{}", format_lambda(lambda_), format_lambda(lambda1_), length_);
    case Kind::adaptive: return "adaptive:" + name_;
    }
    return "unknown";
}

std::vector<std::string> adaptive_rule_names() { return {"left_purge", "stall_reheat", "size_ramp"}; }

FugacitySchedule parse_schedule(std::string_view spec) {
    const auto parts = split(spec, ':');
    const std::string_view head = parts[0];
    if (head == "greedy" || head == "infinite") {
        if (parts.size() != 1) throw Error(ErrorKind::ConfigError, fmt::format("bad schedule '{}'", spec));
        return FugacitySchedule::infinite();
    }
    if (head == "fixed") {
        if (parts.size() != 2) throw Error(ErrorKind::ConfigError, fmt::format("bad schedule '{}'", spec));
        return FugacitySchedule::fixed(parse_fugacity(parts[1]));
    }
    if (head == "seq") {
        if (parts.size() < 2 || spec.size() <= 4) throw Error(ErrorKind::ConfigError, fmt::format("bad schedule '{}'", spec));
        // Paths may themselves contain ':'.
        return FugacitySchedule::sequence(read_sequence_file(std::string(spec.substr(4))));
    }
    if (head == "anneal") {
        if (parts.size() != 4) throw Error(ErrorKind::ConfigError, fmt::format("bad schedule '{}'", spec));
        return FugacitySchedule::anneal(parse_fugacity(parts[1]), parse_fugacity(parts[2]),
                                        parse_u64(parts[3], "anneal length"));
    }
    if (head == "adaptive") {
        if (parts.size() < 2) throw Error(ErrorKind::ConfigError, fmt::format("bad schedule '{}'", spec));
        const std::string_view name = parts[1];
        const std::string canonical(spec.substr(9));
        if (name == "left_purge" && parts.size() == 2) {
            return FugacitySchedule::adaptive(canonical, [](const HistoryDigest& h) {
                return 2 * h.occ_left > h.size ? 1.0 : kInfiniteFugacity;
            });
        }
        if (name == "stall_reheat" && parts.size() == 5) {
            const std::uint64_t window = parse_u64(parts[2], "stall window");
            const double lo = parse_fugacity(parts[3]);
            const double hi = parse_fugacity(parts[4]);
            return FugacitySchedule::adaptive(canonical, [=](const HistoryDigest& h) {
                return h.t - h.step_of_max > window ? lo : hi;
            });
        }
        if (name == "size_ramp" && parts.size() == 3) {
            const double c = parse_double(parts[2], "ramp coefficient");
            if (!(c > 0.0)) throw Error(ErrorKind::ConfigError, "size_ramp coefficient must be positive");
            return FugacitySchedule::adaptive(canonical, [=](const HistoryDigest& h) {
                return std::max(1.0, c * static_cast<double>(h.size));
            });
        }
        throw Error(ErrorKind::ConfigError, fmt::format("unknown adaptive rule '{}'", spec.substr(9)));
    }
    throw Error(ErrorKind::ConfigError, fmt::format("unknown schedule '{}'", spec));
}

}  // namespace annealbench
