#pragma once

// Interchange formats.
//
// Edge list (text):
//   simple:     first line "n", then "u v" per edge (0-indexed, u < v when written)
//   bipartite:  first line "nL nR", then "l r" per edge
// Blank lines and lines starting with '#' are ignored on read.
//
// JSON: an object with "kind" in {"simple", "bipartite", "partitioned_bipartite"}.
//   simple:                {"kind", "n", "edges": [[u, v], ...]}
//   bipartite:             {"kind", "left_size", "right_size", "edges": [[l, r], ...]}
//   partitioned_bipartite: bipartite fields + "blocks": [[v, ...], ...] + "metadata": {...}

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "biclique/graphs.hpp"

namespace biclique {

using AnyGraph = std::variant<SimpleGraph, BipartiteGraph, PartitionedBipartite>;

enum class GraphFormat { edge_list, json };

namespace detail {

inline bool parse_uint_tokens(const std::string& line, std::vector<std::size_t>& out) {
    out.clear();
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) return false;
        try {
            out.push_back(static_cast<std::size_t>(std::stoull(tok)));
        } catch (const std::out_of_range&) {
            return false;
        }
    }
    return true;
}

inline bool skip_line(const std::string& line) {
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

} // namespace detail

/// Parses either edge-list flavour; the header line decides which.
inline std::variant<SimpleGraph, BipartiteGraph> read_edge_list(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::size_t> tok;
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::skip_line(line)) break;
    }
    if (in.fail() && line.empty()) throw ParseError(0, "edge list: missing header line");
    if (!detail::parse_uint_tokens(line, tok) || tok.empty() || tok.size() > 2)
        throw ParseError(lineno, "edge list header must be \"n\" or \"nL nR\", got \"" + line + "\"");

    const bool bipartite = tok.size() == 2;
    SimpleGraph sg(bipartite ? 0 : tok[0]);
    BipartiteGraph bg(bipartite ? tok[0] : 0, bipartite ? tok[1] : 0);
    const std::size_t nl = tok[0], nr = bipartite ? tok[1] : tok[0];

    while (std::getline(in, line)) {
        ++lineno;
        if (detail::skip_line(line)) continue;
        if (!detail::parse_uint_tokens(line, tok) || tok.size() != 2)
            throw ParseError(lineno, "expected two non-negative vertex indices, got \"" + line + "\"");
        if (tok[0] >= nl)
            throw ParseError(lineno, "vertex " + std::to_string(tok[0]) + " out of range [0, " + std::to_string(nl) + ")");
        if (tok[1] >= nr)
            throw ParseError(lineno, "vertex " + std::to_string(tok[1]) + " out of range [0, " + std::to_string(nr) + ")");
        if (bipartite) {
            if (bg.has_edge(tok[0], tok[1])) throw ParseError(lineno, "duplicate edge");
            bg.add_edge(tok[0], tok[1]);
        } else {
            if (tok[0] == tok[1]) throw ParseError(lineno, "self-loop at vertex " + std::to_string(tok[0]));
            if (!sg.add_edge(tok[0], tok[1])) throw ParseError(lineno, "duplicate edge");
        }
    }
    if (bipartite) return bg;
    return sg;
}

inline void write_edge_list(std::ostream& out, const SimpleGraph& g) {
    out << g.size() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline void write_edge_list(std::ostream& out, const BipartiteGraph& g) {
    out << g.left_size() << ' ' << g.right_size() << '\n';
    for (auto [l, r] : g.edges()) out << l << ' ' << r << '\n';
}

inline nlohmann::json graph_to_json(const SimpleGraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    return {{"kind", "simple"}, {"n", g.size()}, {"edges", std::move(edges)}};
}

inline nlohmann::json graph_to_json(const BipartiteGraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (auto [l, r] : g.edges()) edges.push_back({l, r});
    return {{"kind", "bipartite"}, {"left_size", g.left_size()}, {"right_size", g.right_size()}, {"edges", std::move(edges)}};
}

inline nlohmann::json graph_to_json(const PartitionedBipartite& g) {
    auto j = graph_to_json(g.graph());
    j["kind"] = "partitioned_bipartite";
    j["blocks"] = g.blocks();
    j["metadata"] = g.metadata();
    return j;
}

inline nlohmann::json graph_to_json(const AnyGraph& g) {
    return std::visit([](const auto& x) { return graph_to_json(x); }, g);
}

inline AnyGraph graph_from_json(const nlohmann::json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "simple") {
            SimpleGraph g(j.at("n").get<std::size_t>());
            for (const auto& e : j.at("edges")) {
                auto [u, v] = e.get<std::pair<std::size_t, std::size_t>>();
                if (u >= g.size() || v >= g.size())
                    throw ValidationError("simple graph json: edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                          ") out of range");
                if (u == v) throw ValidationError("simple graph json: self-loop at " + std::to_string(u));
                if (!g.add_edge(u, v)) throw ValidationError("simple graph json: duplicate edge");
            }
            return g;
        }
        if (kind == "bipartite" || kind == "partitioned_bipartite") {
            BipartiteGraph g(j.at("left_size").get<std::size_t>(), j.at("right_size").get<std::size_t>());
            for (const auto& e : j.at("edges")) {
                auto [l, r] = e.get<std::pair<std::size_t, std::size_t>>();
                if (l >= g.left_size() || r >= g.right_size())
                    throw ValidationError("bipartite graph json: edge (" + std::to_string(l) + ", " +
                                          std::to_string(r) + ") out of range");
                g.add_edge(l, r);
            }
            if (kind == "bipartite") return g;
            auto blocks = j.at("blocks").get<std::vector<std::vector<Vertex>>>();
            auto meta = j.value("metadata", nlohmann::json::object());
            return PartitionedBipartite(std::move(g), std::move(blocks), std::move(meta));
        }
        throw ValidationError("graph json: unknown kind \"" + kind + "\"");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("graph json: ") + e.what());
    }
}

/// Parses JSON text, mapping syntax errors to ParseError with a line number.
inline nlohmann::json parse_json_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
        throw ParseError(line, e.what());
    }
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline GraphFormat format_for(const std::filesystem::path& path) {
    return path.extension() == ".json" ? GraphFormat::json : GraphFormat::edge_list;
}

inline AnyGraph read_graph(const std::filesystem::path& path) {
    auto text = slurp(path);
    if (format_for(path) == GraphFormat::json) return graph_from_json(parse_json_text(text));
    std::istringstream in(text);
    auto g = read_edge_list(in);
    if (auto* s = std::get_if<SimpleGraph>(&g)) return std::move(*s);
    return std::get<BipartiteGraph>(std::move(g));
}

inline void write_graph(std::ostream& out, const AnyGraph& g, GraphFormat format) {
    if (format == GraphFormat::json) {
        out << graph_to_json(g).dump() << '\n';
        return;
    }
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PartitionedBipartite>) {
                throw std::invalid_argument("edge-list format cannot carry a partition; use .json");
            } else {
                write_edge_list(out, x);
            }
        },
        g);
}

inline void write_graph(const std::filesystem::path& path, const AnyGraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_graph(out, g, format_for(path));
}

} // namespace biclique
