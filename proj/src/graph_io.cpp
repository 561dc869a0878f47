#include <charconv>
#include <fstream>
#include <sstream>

#include "annealbench/errors.hpp"
#include "annealbench/graph.hpp"

namespace annealbench {

void write_graph(std::ostream& out, const Graph& g) {
    out << "p is " << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (const auto& [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
    if (g.has_sides()) {
        for (VertexId v = 0; v < g.num_vertices(); ++v) {
            const Side s = g.side(v);
            if (s != Side::none) out << "l " << v << ' ' << (s == Side::left ? 'L' : 'R') << '\n';
        }
    }
    if (g.has_groups()) {
        for (VertexId v = 0; v < g.num_vertices(); ++v)
            if (g.group(v) != kNoGroup) out << "g " << v << ' ' << g.group(v) << '\n';
    }
}

std::string format_graph(const Graph& g) {
    std::ostringstream out;
    write_graph(out, g);
    return out.str();
}

namespace {

template <typename Int>
Int parse_int(std::string_view token, std::size_t line_no) {
    Int value{};
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": bad integer '" + std::string(token) + "'");
    return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

Graph read_graph(std::istream& in, GraphKind kind) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t n = 0, m_declared = 0;
    std::vector<Edge> edges;
    VertexLabels labels;
    bool any_side = false, any_group = false;

    while (std::getline(in, line)) {
        ++line_no;
        const auto tok = split_ws(line);
        if (tok.empty() || tok[0] == "c") continue;
        if (tok[0] == "p") {
            if (have_header || tok.size() != 4 || tok[1] != "is")
                throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": malformed header");
            n = parse_int<std::size_t>(tok[2], line_no);
            m_declared = parse_int<std::size_t>(tok[3], line_no);
            labels.sides.assign(n, Side::none);
            labels.groups.assign(n, kNoGroup);
            edges.reserve(m_declared);
            have_header = true;
            continue;
        }
        if (!have_header) throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": record before header");
        if (tok.size() != 3) throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": expected 3 fields");
        const auto v = parse_int<VertexId>(tok[1], line_no);
        if (tok[0] == "e") {
            edges.emplace_back(v, parse_int<VertexId>(tok[2], line_no));
        } else if (tok[0] == "l") {
            if (v >= n) throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": vertex out of range");
            if (tok[2] == "L") labels.sides[v] = Side::left;
            else if (tok[2] == "R") labels.sides[v] = Side::right;
            else throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": side must be L or R");
            any_side = true;
        } else if (tok[0] == "g") {
            if (v >= n) throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": vertex out of range");
            labels.groups[v] = parse_int<std::int64_t>(tok[2], line_no);
            any_group = true;
        } else {
            throw Error(ErrorKind::IoError, "line " + std::to_string(line_no) + ": unknown record '" + std::string(tok[0]) + "'");
        }
    }
    if (!have_header) throw Error(ErrorKind::IoError, "missing 'p is' header");
    if (!any_side) labels.sides.clear();
    if (!any_group) labels.groups.clear();
    Graph g = build_graph(n, edges, std::move(labels), kind);
    if (g.num_edges() != m_declared)
        throw Error(ErrorKind::IoError, "header declares " + std::to_string(m_declared) + " edges, found " +
                                            std::to_string(g.num_edges()));
    return g;
}

Graph parse_graph(std::string_view text, GraphKind kind) {
    std::istringstream in{std::string(text)};
    return read_graph(in, kind);
}

Graph load_graph(const std::string& path, GraphKind kind) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    return read_graph(in, kind);
}

void save_graph(const std::string& path, const Graph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
    write_graph(out, g);
    if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

}  // namespace annealbench
